"""knotforge command line.

Exit codes: 0 ok, 2 bad input, 3 impossible realization, 4 evaluator
limit exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from . import construct, surgery
from . import tangle as tg
from .diagram import (
    Diagram,
    DiagramError,
    ResourceLimitError,
    alexander_det,
    bound_report,
    conway_skein,
    equal_up_to_units,
    is_split_diagram,
)
from .poly import (
    ConwayPoly,
    DegreeError,
    IntLaurent,
    NotConwayImageError,
    PolyParseError,
    alexander_to_conway,
    conway_to_alexander,
)

EXIT_OK, EXIT_INPUT, EXIT_IMPOSSIBLE, EXIT_LIMIT = 0, 2, 3, 4

_BAD_INPUT = (PolyParseError, NotConwayImageError, DegreeError, DiagramError,
              tg.ConwaySyntaxError, construct.RealizationError, surgery.SurgeryError,
              ValueError, OSError, json.JSONDecodeError)


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _read_diagram(path: str) -> Diagram:
    with open(path) as fh:
        raw = fh.read()
    if not raw.strip():
        raise ValueError(f"{path} is empty")
    if raw.lstrip().startswith("{"):
        data = json.loads(raw)
        data = data.get("result", data)
        return Diagram.from_pd(data["pd"], data.get("signs"), data.get("loops", 0))
    return Diagram.from_pd_text(raw)


def _conway_diagram(text: str) -> Diagram:
    t = tg.parse_conway(text)
    return tg.tangle_to_diagram(t) if isinstance(t, tg.Closure) else tg.closure(t)


def _input_diagram(args) -> Diagram:
    if getattr(args, "pd", None):
        return _read_diagram(args.pd)
    if getattr(args, "conway", None) is not None:
        return _conway_diagram(args.conway)
    raise ValueError("give --pd FILE or --conway TEXT")


def _input_nabla(args) -> ConwayPoly:
    if args.nabla is not None and args.delta is not None:
        raise ValueError("give only one of --nabla and --delta")
    if args.nabla is not None:
        return ConwayPoly.parse(args.nabla)
    if args.delta is not None:
        return alexander_to_conway(IntLaurent.parse(args.delta))
    raise ValueError("give --nabla or --delta")


def _realize(nabla: ConwayPoly, n: int, args) -> construct.RealizedLink:
    if n == 1:
        return construct.realize_knot(nabla)
    if n == 2:
        return construct.realize_link2(nabla, mirror_trick=getattr(args, "mirror_trick", False))
    signs = None
    if getattr(args, "clasp_signs", None):
        signs = [int(s) for s in args.clasp_signs.split(",")]
    return construct.realize_link_n(nabla, n, clasp_signs=signs)


# -- subcommands --------------------------------------------------------


def cmd_realize(args):
    nabla = _input_nabla(args)
    r = _realize(nabla, args.components, args)
    data = r.to_json()
    lines = [f"nabla       {r.nabla}", f"components  {r.components}", f"kind        {r.kind}",
             f"genus       {r.genus}"]
    for k, v in r.counts.items():
        lines.append(f"{k:<20}{v}")
    if r.bound is not None:
        lines.append(f"volume bound {r.bound:.6f}  ({r.bound_formula})")
    if r.flags:
        lines.append(f"flags       {json.dumps(r.flags, sort_keys=True)}")
    lines.append("certificate " + ", ".join(k for k, v in r.certificate.items() if v is True))
    lines.append(r.diagram.to_pd_text().rstrip())
    _emit(args, {"command": "realize", "result": data}, "\n".join(lines))


def cmd_eval(args):
    d = _input_diagram(args)
    nabla = conway_skein(d)
    delta = conway_to_alexander(nabla)
    if is_split_diagram(d) or not d.crossings:
        check = "skipped"
    else:
        check = "agree" if equal_up_to_units(alexander_det(d), delta) else "disagree"
    payload = {"command": "eval", "nabla": str(nabla), "alexander": str(delta),
               "components": d.n_components, "crossings": len(d.crossings),
               "determinant_check": check}
    _emit(args, payload, f"nabla  {nabla}\ndelta  {delta}\ncomponents {d.n_components}\n"
                         f"determinant check: {check}")
    if check == "disagree":
        raise _Fail(1, "skein and determinant disagree")


def _tree(t):
    if isinstance(t, tg.Integer):
        return t.n
    if isinstance(t, tg.Infinity):
        return "oo"
    if isinstance(t, tg.Product):
        return {"product": [_tree(c) for c in t.children]}
    if isinstance(t, tg.Ramification):
        return {"ramification": [_tree(c) for c in t.children]}
    return {"closure": _tree(t.child)}


def cmd_parse(args):
    t = tg.parse_conway(args.text, strict=args.strict)
    canon = tg.print_conway(t)
    _emit(args, {"command": "parse", "canonical": canon, "tree": _tree(t)}, canon)


def cmd_normalize(args):
    m = tg.MontesinosForm.parse(args.text)
    canon = str(tg.montesinos_canonical(m))
    _emit(args, {"command": "normalize", "input": args.text, "canonical": canon}, canon)


def cmd_surgery(args):
    if args.action == "triples":
        t = surgery.surgery_triples(args.k, args.n)
        _emit(args, {"command": "surgery", "action": "triples", "triple": t.to_json()},
              f"{t.p} {t.q} {t.r}")
    elif args.action == "large":
        trip = surgery.large_volume_triples(args.q_max)
        _emit(args, {"command": "surgery", "action": "large", "triples": [list(x) for x in trip]},
              "\n".join(" ".join(map(str, x)) for x in trip))
    else:
        d = _input_diagram(args)
        site = surgery.clasp_site(d, *args.site)
        out = surgery.apply_tangle_surgery(d, site, surgery.surgery_triples(args.k, args.n))
        _emit(args, {"command": "surgery", "action": "apply", "result": out.to_json(),
                     "nabla": str(conway_skein(out))}, out.to_pd_text().rstrip())


def cmd_bound(args):
    d = _input_diagram(args)
    rep = bound_report(d)
    vb = rep["volume_bound"]
    text = f"t(D) = {rep['t_strong']}\n10 V0 (t-1) = " + (f"{vb:.6f}" if vb is not None else "n/a")
    _emit(args, dict(rep, command="bound"), text)


def cmd_family(args):
    base = _realize(_input_nabla(args), args.components, args)
    fam = surgery.enumerate_family(base, args.count, mode=args.mode)
    if args.count == 0:
        print(json.dumps({"base": base.to_json(), "members": 0}, sort_keys=True))
        return
    for line in fam.json_lines():
        print(line)


# -- wiring ---------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="knotforge", description="Conway polynomial realization toolkit")
    p.add_argument("--limit", type=int, help="crossing limit for the skein evaluator")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, poly=False, diagram=False):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if poly:
            sp.add_argument("--nabla")
            sp.add_argument("--delta")
            sp.add_argument("--components", type=int, default=1)
            sp.add_argument("--clasp-signs", help="comma separated +1/-1 list (n >= 3)")
            sp.add_argument("--mirror-trick", action="store_true")
        if diagram:
            sp.add_argument("--pd", help="PD text file or realize --json output")
            sp.add_argument("--conway", help="Conway notation")

    sp = sub.add_parser("realize", help="build a certified diagram for a polynomial")
    common(sp, poly=True)
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("eval", help="Conway and Alexander polynomials of a diagram")
    common(sp, diagram=True)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("parse", help="parse and reprint Conway notation")
    common(sp)
    sp.add_argument("text")
    sp.add_argument("--strict", action="store_true")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("normalize", help="canonical Montesinos form")
    common(sp)
    sp.add_argument("text")
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("surgery", help="surgery triples and clasp surgery")
    common(sp, diagram=True)
    sp.add_argument("action", choices=["triples", "large", "apply"])
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--q-max", type=int, default=15)
    sp.add_argument("--site", type=int, nargs=2, metavar=("I", "J"))
    sp.set_defaults(func=cmd_surgery)

    sp = sub.add_parser("bound", help="twist number and volume bound")
    common(sp, diagram=True)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("family", help="polynomial-preserving family as JSON lines")
    common(sp, poly=True)
    sp.add_argument("--count", type=int, default=3)
    sp.add_argument("--mode", choices=["surgery", "stallings"])
    sp.set_defaults(func=cmd_family)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    if getattr(args, "action", None) == "apply" and not args.site:
        print("error: surgery apply needs --site I J", file=sys.stderr)
        return EXIT_INPUT
    saved = os.environ.get("KNOTFORGE_LIMIT")
    if args.limit is not None:
        os.environ["KNOTFORGE_LIMIT"] = str(args.limit)
    try:
        return _run(args)
    finally:
        if saved is None:
            os.environ.pop("KNOTFORGE_LIMIT", None)
        else:
            os.environ["KNOTFORGE_LIMIT"] = saved


def _run(args) -> int:
    try:
        args.func(args)
    except _Fail as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except construct.ImpossibleRealization as e:
        print(f"impossible: {e}", file=sys.stderr)
        return EXIT_IMPOSSIBLE
    except ResourceLimitError as e:
        print(f"limit: {e}", file=sys.stderr)
        return EXIT_LIMIT
    except _BAD_INPUT as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
