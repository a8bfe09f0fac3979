"""Explicit realizations of Conway polynomials by special arborescent diagrams.

Knots come from a family of plane Seifert graphs (one chain of bands per
coefficient); two-component links by smoothing the clasp crossing that
unknots such a knot; links with more components by claspings of a
two-component link, or by genus-0 pretzel-type surfaces.  Every output
carries a certificate that is recomputed from the diagram, never assumed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import _skein
from .diagram import (
    V0,
    Diagram,
    LinkingGraph,
    clasp,
    conway_skein,
    linking_graph,
    replace_by_twist,
    seifert_graph_diagram,
    twist_classes,
    validate,
)
from .poly import (
    ONE,
    Z,
    ConwayPoly,
    IntLaurent,
    coeff_vector,
    conway_to_alexander,
    is_admissible,
    is_monic,
    poly_det,
)


class RealizationError(ValueError):
    """The input cannot be realized (bad polynomial, unsupported case)."""


class ImpossibleRealization(RealizationError):
    """No prime link with the requested data exists."""


class CertificateError(RuntimeError):
    """A construction produced a diagram failing its own certificate."""


# ---------------------------------------------------------------------------
# Seifert matrices


@dataclass(frozen=True)
class SeifertMatrix:
    rows: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def transpose(self) -> "SeifertMatrix":
        return SeifertMatrix(tuple(zip(*self.rows)))

    def to_json(self):
        return [list(r) for r in self.rows]


def seifert_matrix_V(a: Sequence[int]) -> SeifertMatrix:
    """Block tridiagonal matrix with 2x2 blocks ``[[-1,-1],[0,a_1]]``,
    ``[[0,-1],[0,a_i]]`` and single ``1`` couplings between blocks."""
    a = list(a)
    if not a:
        raise ValueError("need at least one coefficient")
    n = 2 * len(a)
    m = [[0] * n for _ in range(n)]
    for i, ai in enumerate(a):
        r = 2 * i
        m[r][r] = -1 if i == 0 else 0
        m[r][r + 1] = -1
        m[r + 1][r + 1] = ai
        if r + 2 < n:
            m[r + 1][r + 2] = 1
            m[r + 2][r + 1] = 1
    return SeifertMatrix(tuple(tuple(row) for row in m))


def alexander_from_seifert(V: SeifertMatrix) -> IntLaurent:
    """``t^(-n/2) det(V - t V^T)`` exactly."""
    n = V.size
    if n % 2 or any(len(r) != n for r in V.rows):
        raise ValueError("Seifert matrix must be square of even size")
    if n == 0:
        return IntLaurent.constant(1)
    entries = [[[V.rows[i][j], -V.rows[j][i]] for j in range(n)] for i in range(n)]
    coeffs = poly_det(entries)
    return IntLaurent({2 * (k - n // 2): c for k, c in enumerate(coeffs) if c})


# ---------------------------------------------------------------------------
# certificates


@dataclass
class RealizedLink:
    diagram: Diagram
    nabla: ConwayPoly
    components: int
    kind: str
    genus: int
    matrix: Optional[SeifertMatrix] = None
    sites: Dict[str, object] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)
    bound: Optional[float] = None
    bound_formula: Optional[str] = None
    flags: Dict[str, object] = field(default_factory=dict)
    certificate: Dict[str, object] = field(default_factory=dict)
    linking: Optional[LinkingGraph] = None

    def to_json(self) -> dict:
        d = self.diagram.renumbered()
        out = {
            "kind": self.kind,
            "nabla": str(self.nabla),
            "components": self.components,
            "genus": self.genus,
            "pd": [list(x[:4]) for x in d.crossings],
            "signs": list(d.signs()),
            "loops": d.loops,
            "matrix": self.matrix.to_json() if self.matrix else None,
            "sites": self.sites,
            "counts": self.counts,
            "bound": self.bound,
            "bound_formula": self.bound_formula,
            "flags": self.flags,
            "certificate": self.certificate,
        }
        if self.linking is not None:
            out["linking_graph"] = self.linking.to_json()
        return out


def _require(cond: bool, what: str):
    if not cond:
        raise CertificateError(f"certificate failed: {what}")


def _common_counts(d: Diagram) -> Dict[str, int]:
    sd = validate(d)
    t_rev, t = twist_classes(d)
    return {"crossings": len(d.crossings), "seifert_circles": sd.s, "chi": sd.chi,
            "canonical_genus": sd.genus, "t_strong_reverse": t_rev, "t_strong": t}


# ---------------------------------------------------------------------------
# knots


def knot_template(a: Sequence[int]):
    """Edges and rotation of the plane Seifert graph for ``a_1..a_d``.

    Two -1 bands ``t``, ``m`` between the hubs L and R form the clasp whose
    crossing ``t`` unknots the result.
    """
    a = list(a)
    d = len(a)

    def P(k):
        return "R" if k == 0 else f"P{k}"

    edges = {"t": ("L", "R", -1), "m": ("L", "R", -1)}
    for i in range(1, d):
        edges[f"A{i}"] = ("L", P(2 * i - 1), 2)
        edges[f"B{i}"] = (P(2 * i - 1), P(2 * i - 2), 2 * a[i - 1] - 1)
        edges[f"C{i}"] = ("L", P(2 * i), -1)
        edges[f"D{i}"] = (P(2 * i), P(2 * i - 1), -1)
    edges["E"] = ("L", P(2 * d - 2), 2 * a[-1] + 1)
    rot = {"L": ["E"] + [e for i in range(d - 1, 0, -1) for e in (f"C{i}", f"A{i}")] + ["m", "t"],
           "R": ["t", "m", "B1" if d > 1 else "E"]}
    for i in range(1, d):
        rot[P(2 * i - 1)] = [f"B{i}", f"A{i}", f"D{i}"]
        rot[P(2 * i)] = [f"D{i}", f"C{i}", f"B{i + 1}" if i < d - 1 else "E"]
    return edges, rot


def _knot_diagram(a):
    return seifert_graph_diagram(*knot_template(a))


def _unknots_by_switch(d: Diagram, i: int) -> bool:
    xs, loops = _skein.simplify(d.switch(i).crossings, d.loops)
    return not xs and loops == 1


def realize_knot(nabla: ConwayPoly) -> RealizedLink:
    if not is_admissible(nabla, 1):
        raise RealizationError(f"{nabla} is not the Conway polynomial of a knot")
    a = coeff_vector(nabla)
    d = len(a)
    if d == 0:
        return RealizedLink(Diagram.unknot(), nabla, 1, "knot", 0, counts={"crossings": 0},
                            certificate={"skein": True, "genus": True})
    D, tags = _knot_diagram(a)
    got = conway_skein(D)
    _require(got == nabla, f"skein gives {got}, wanted {nabla}")
    counts = _common_counts(D)
    _require(counts["canonical_genus"] == d, "canonical genus")
    _require(counts["t_strong_reverse"] == 4 * d - 1, "reverse twist count")
    star = [k for k, t in enumerate(tags) if t in ("t", "m")]
    site = tags.index("t")
    _require(_unknots_by_switch(D, site), "switching the marked crossing unknots")
    bound = None
    formula = None
    if nabla not in (ONE + Z * Z,):
        bound = 10 * V0 * (4 * d - 3)
        formula = "10*V0*(4d-3)"
    return RealizedLink(
        D, nabla, 1, "knot", d,
        matrix=seifert_matrix_V(a),
        sites={"unknotting": site, "clasp_star": star,
               "bands": {str(t): [k for k, u in enumerate(tags) if u == t] for t in dict.fromkeys(tags)}},
        counts=counts, bound=bound, bound_formula=formula,
        certificate={"skein": True, "genus": True, "t_strong_reverse": True,
                     "t_strong_is_4d-2": counts["t_strong"] == 4 * d - 2,
                     "unknotting_switch": True},
    )


# ---------------------------------------------------------------------------
# two components


def _link2_diagram(nabla_L: ConwayPoly):
    """Smooth the unknotting crossing of the knot for ``1 - z nabla_L``."""
    K = ONE - Z * nabla_L
    a = coeff_vector(K)
    D, tags = _knot_diagram(a)
    i = tags.index("t")
    return D.smooth(i), tags[:i] + tags[i + 1:], a


def realize_link2(nabla_L: ConwayPoly, mirror_trick: bool = False) -> RealizedLink:
    if nabla_L.is_zero():
        raise RealizationError("the zero polynomial is not realized by this construction")
    if not is_admissible(nabla_L, 2):
        raise RealizationError(f"{nabla_L} is not the Conway polynomial of a 2-component link")
    a1 = nabla_L[1]
    mirrored = bool(mirror_trick and a1 in (1, 2, 3))
    target = -nabla_L if mirrored else nabla_L
    L, tags, a = _link2_diagram(target)
    if mirrored:
        L = L.mirror()
    got = conway_skein(L)
    _require(got == nabla_L, f"skein gives {got}, wanted {nabla_L}")
    d = len(a)
    counts = _common_counts(L)
    bound = 20 * V0 * (d - 1) if d > 1 else None
    return RealizedLink(
        L, nabla_L, 2, "link2", counts["canonical_genus"],
        sites={"bands": {str(t): [k for k, u in enumerate(tags) if u == t] for t in dict.fromkeys(tags)}},
        counts=counts, bound=bound, bound_formula="20*V0*(d-1)" if bound is not None else None,
        flags={"mirror_trick": mirrored},
        certificate={"skein": True, "components": L.n_components == 2},
        linking=linking_graph(L),
    )


# ---------------------------------------------------------------------------
# more components


def linking_template(n: int, k: int, ab: int = 2) -> Dict[Tuple[str, str], Optional[int]]:
    """Expected linking graph: a chain through all components plus one chord.

    Values ``None`` stand for "+1 or -1"; the A-D weight is ``k``.  For three
    components A-B is 2 after a positive clasping, 0 after a negative one.
    """
    if n == 3:
        return {("A", "B"): ab, ("B", "D"): -1, ("A", "D"): k}
    chain = ["A"] + [f"C{i}" for i in range(1, n - 2)] + ["B"]
    out = {("A", "B"): 1, ("B", "D"): -1, ("A", "D"): k}
    for u, v in zip(chain, chain[1:]):
        out[(u, v)] = None
    return out


def match_linking_template(g: LinkingGraph, n: int, k: Optional[int] = None):
    """Component labelling realizing :func:`linking_template`, or ``None``.

    Linking numbers are compared up to one global sign.  ``k`` is read off the
    graph when not given.
    """
    names = ["A", "B", "D"] + [f"C{i}" for i in range(1, n - 2)]
    if len(g.vertices) != n:
        return None
    for perm in itertools.permutations(g.vertices):
        lab = dict(zip(names, perm))

        def lk(u, v):
            i, j = sorted((lab[u], lab[v]))
            return g.edges.get((i, j), 0)

        kk = lk("A", "D") if k is None else k
        for sgn, ab in itertools.product((1, -1), (2, 0) if n == 3 else (2,)):
            tmpl = linking_template(n, sgn * kk, ab)
            want = {}
            for (u, v), w in tmpl.items():
                i, j = sorted((lab[u], lab[v]))
                want[(i, j)] = w
            ok = True
            for i, j in itertools.combinations(sorted(g.vertices), 2):
                have = g.edges.get((i, j), 0)
                w = want.get((i, j), 0)
                if w is None:
                    ok = abs(have) == 1
                else:
                    ok = have == sgn * w
                if not ok:
                    break
            if ok:
                return {name: lab[name] for name in names}, sgn * kk
    return None


def _clasped(Lp: Diagram, tags, signs: Sequence[int], d: int) -> Tuple[Diagram, List[int]]:
    """Clasp ``Lp`` once per entry of ``signs`` on the designated band.

    The band's crossing is first widened to a reverse twist row
    ``s, -s, s, ...`` (R2 moves only), so crossings of either sign exist.
    """
    edge = "B2" if d >= 3 else "E"
    x = tags.index(edge)
    s = Lp.crossings[x].sign
    row = [s] + [-s, s] * len(signs)
    D = replace_by_twist(Lp, x, row, reverse=True)
    used = set()
    sites = []
    for sg in signs:
        j = next(j for j, v in enumerate(row) if v == sg and j not in used)
        used.add(j)
        sites.append((x + j, sg))
    for p, sg in sorted(sites, reverse=True):
        D = clasp(D, p, sg)
    # each earlier clasp pushes later indices up by one
    order = sorted(p for p, _ in sites)
    return D, [p + order.index(p) for p, _ in sites]


def default_clasp_signs(n: int) -> Tuple[int, ...]:
    """Positive first, then alternating."""
    return tuple(1 if k % 2 == 0 else -1 for k in range(n - 2))


def _theta(labels: Sequence[int]) -> Diagram:
    edges = {k: ("T", "B", x) for k, x in enumerate(labels)}
    rot = {"T": list(range(len(labels))), "B": list(range(len(labels)))[::-1]}
    return seifert_graph_diagram(edges, rot)[0]


def _triangle(n: int) -> Diagram:
    """Genus-0 surface on three discs: (2,2,-2) bands between u and v, one -2
    band between v and w and the rest of the alternating row
    (2,-2,2,...,2) of length n-2 between u and w."""
    tail = [2 * (-1) ** k for k in range(n - 2)]
    edges = {("A", k): ("u", "v", x) for k, x in enumerate((2, 2, -2))}
    uw, vw = [], []
    for k, x in enumerate(tail):
        e = ("T", k)
        if k == 1:
            edges[e] = ("v", "w", x)
            vw.append(e)
        else:
            edges[e] = ("u", "w", x)
            uw.append(e)
    A = [("A", k) for k in range(3)]
    rot = {"u": A + uw, "v": vw + A[::-1], "w": uw[::-1] + vw}
    return seifert_graph_diagram(edges, rot)[0]


def genus0_diagram(n: int, sign: int) -> Tuple[Diagram, str]:
    """Genus-0 special diagram with ``n`` components and nabla = sign z^(n-1)."""
    if n < 2:
        raise RealizationError("genus 0 with n < 2 is the unknot")
    if n == 2:
        D = _theta([sign, sign])
        return D, "hopf"
    if n % 2 == 0:
        labels = [4] + [(-2) * (-1) ** k for k in range(n - 1)]
        D = _theta(labels)
        if conway_skein(D)[n - 1] != sign:
            return D.mirror(), "pretzel-mirror" + str(tuple(-x for x in labels))
        return D, "pretzel" + str(tuple(labels))
    natural = (-1) ** (n // 2)
    if sign == natural:
        labels = [2 * (-1) ** k for k in range(n)]
        return _theta(labels), "pretzel" + str(tuple(labels))
    if n == 3:
        raise ImpossibleRealization("there is no prime 3-component link of genus 0 with nabla = +z^2")
    return _triangle(n), "three-disc family (2,2,-2)(2,-2,...,2)"


def realize_link_n(nabla: ConwayPoly, n: int, monic_mode: bool = True,
                   clasp_signs: Optional[Sequence[int]] = None) -> RealizedLink:
    """Realize an ``n``-component Conway polynomial, ``n >= 3``.

    Positive genus: ``n - 2`` claspings (signs ``clasp_signs``, default
    ``+, -, +, ...``) on the band with ``2 a_2 - 1`` twists of a mirrored
    two-component link.  With ``m+`` positive and ``m-`` negative claspings
    that link realizes ``(-1)^m- nabla / z^(n-2) + (m+ - m-) z``.
    Genus 0: pretzel surfaces or the three-disc family.  ``monic_mode``
    insists on a monic input.
    """
    if n < 3:
        raise RealizationError("use realize_knot / realize_link2 for n < 3")
    if nabla.is_zero():
        raise RealizationError("nabla must be nonzero")
    if not is_admissible(nabla, n):
        raise RealizationError(f"{nabla} is not admissible for {n} components")
    if monic_mode and not is_monic(nabla):
        raise RealizationError(f"{nabla} is not monic")
    top = nabla.maxdeg
    g = (top - n + 1) // 2
    if g == 0:
        c = nabla[n - 1]
        if abs(c) != 1:
            raise RealizationError("genus-0 realization needs nabla = +-z^(n-1)")
        D, how = genus0_diagram(n, c)
        got = conway_skein(D)
        _require(got == nabla, f"skein gives {got}, wanted {nabla}")
        counts = _common_counts(D)
        _require(counts["canonical_genus"] == 0 and D.n_components == n, "genus 0, n components")
        hyperbolic = not (n == 3 and c == -1)
        bound = 10 * V0 * n if hyperbolic else None
        return RealizedLink(D, nabla, n, "genus0", 0, counts=counts, bound=bound,
                            bound_formula="10*V0*n" if bound else None,
                            flags={"construction": how},
                            certificate={"skein": True, "components": True, "genus": True},
                            linking=linking_graph(D))
    need = n - 2
    signs = tuple(clasp_signs) if clasp_signs is not None else default_clasp_signs(n)
    if len(signs) != need or any(x not in (1, -1) for x in signs):
        raise RealizationError(f"need {need} clasp signs, each +1 or -1")
    neg = signs.count(-1)
    prime = ConwayPoly({e - need: cf * (-1) ** neg for e, cf in nabla.items()}) + Z * (need - 2 * neg)
    Lp, tags, a = _link2_diagram(-prime)
    Lp = Lp.mirror()
    D, sites = _clasped(Lp, tags, signs, len(a))
    got = conway_skein(D)
    _require(got == nabla, f"skein gives {got}, wanted {nabla}")
    _require(D.n_components == n, "component count")
    counts = _common_counts(D)
    _require(top == 1 - counts["chi"], "degree equals 1 - chi")
    lg = linking_graph(D)
    match = match_linking_template(lg, n)
    _require(match is not None, "linking graph template")
    labels, k = match
    return RealizedLink(
        D, nabla, n, "linkN", counts["canonical_genus"],
        sites={"claspings": sites, "clasp_signs": list(signs), "components": labels},
        counts=counts, bound=10 * V0 * (2 * top - n), bound_formula="10*V0*(2maxdeg-n)",
        flags={"chord_k": k, "cut_vertices": lg.cut_vertices()},
        certificate={"skein": True, "components": True, "degree": True, "linking_template": True},
        linking=lg,
    )


def fibered_necessary(d: Diagram, nabla: ConwayPoly) -> bool:
    """Necessary condition for the canonical surface of ``d`` to be a fiber."""
    if conway_skein(d) != nabla:
        raise ValueError("diagram and polynomial disagree")
    if nabla.is_zero():
        return False
    return is_monic(nabla) and nabla.maxdeg == 1 - validate(d).chi
