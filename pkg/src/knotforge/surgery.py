"""Rewrites that keep the Conway polynomial: tangle surgeries on parallel
clasps, claspings, full twists of two strands, and the integer triples
that drive them.  Each rewrite is re-checked with the skein evaluator."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import tangle as _tg
from .construct import RealizedLink
from .diagram import (
    Crossing,
    Diagram,
    _bigons,
    _faces,
    _frame,
    _leaves,
    _local_crossing,
    clasp,
    conway_skein,
    linking_graph,
    linking_number,
    replace_by_braid,
    validate,
)
from .poly import Z, ConwayPoly


class SurgeryError(ValueError):
    pass


class VerificationError(RuntimeError):
    """A rewrite changed the polynomial it was supposed to keep."""


# ---------------------------------------------------------------------------
# arithmetic


@dataclass(frozen=True)
class SurgeryTriple:
    p: int
    q: int
    r: int
    k: int
    n: int

    def eq_A(self) -> int:
        p, q, r = self.p, self.q, self.r
        return (p - 1) * q + (p - 1) * r + q * r + 1

    def eq_B(self) -> int:
        p, q, r = self.p, self.q, self.r
        return (p + 1) * q + (p + 1) * r + q * r + 1

    def check(self):
        ok = (self.q == 1 + 2 * self.n * self.k and self.r == 2 * self.k - 1 - 2 * self.n * self.k
              and self.p % 2 == 0 and self.q + self.r == 2 * self.k
              and self.eq_A() == 0 and self.eq_B() == 4 * self.k)
        if not ok:
            raise ArithmeticError(f"triple {self} violates its defining identities")
        return self

    def to_json(self):
        return {"p": self.p, "q": self.q, "r": self.r, "k": self.k, "n": self.n}


def surgery_triples(k: int, n: int) -> SurgeryTriple:
    if k == 0:
        raise ValueError("k must be nonzero")
    q = 1 + 2 * n * k
    r = 2 * k - 1 - 2 * n * k
    num = 2 * k - 1 - q * r
    if num % (2 * k):
        raise ArithmeticError(f"p is not integral for k={k}, n={n}")
    return SurgeryTriple(num // (2 * k), q, r, k, n).check()


def v2_pretzel(a: int, b: int, c: int) -> int:
    """Second coefficient of the Conway polynomial of the (a,b,c) pretzel knot."""
    if not (a % 2 and b % 2 and c % 2):
        raise ValueError("pretzel knot needs three odd parameters")
    return (a * b + a * c + b * c + 1) // 4


def large_volume_triples(q_max: int) -> List[Tuple[int, int, int]]:
    """Triples ``p, q, -r > 1`` odd with ``q + r = 2`` and ``pq + pr + qr = -1``."""
    if q_max < 5:
        raise ValueError("q_max must be at least 5")
    out = []
    for q in range(3, q_max + 1, 2):
        r = 2 - q
        p = (q * q - 2 * q - 1) // 2
        assert p * q + p * r + q * r == -1
        out.append((p, q, r))
    return out


# ---------------------------------------------------------------------------
# sites


@dataclass(frozen=True)
class ClaspSite:
    """A parallel clasp: both strands run from ``bottom`` into ``top``."""

    bottom: int
    top: int
    sign: int
    k: int = 1

    def to_json(self):
        return {"bottom": self.bottom, "top": self.top, "sign": self.sign, "k": self.k}


def clasp_site(d: Diagram, i: int, j: int) -> ClaspSite:
    """Validate crossings ``i``, ``j`` as a parallel clasp face and orient it."""
    pairs = {(a, b) for a, b, kind in _bigons(d) if kind == "parallel"}
    if (i, j) not in pairs and (j, i) not in pairs:
        raise SurgeryError(f"crossings {i}, {j} do not bound a parallel clasp")
    x, y = d.crossings[i], d.crossings[j]
    if x.sign != y.sign:
        raise SurgeryError("clasp crossings have different signs")
    if {x.c, x.over_out()} == {y.a, y.over_in()}:
        return ClaspSite(i, j, x.sign)
    if {y.c, y.over_out()} == {x.a, x.over_in()}:
        return ClaspSite(j, i, x.sign)
    raise SurgeryError(f"crossings {i}, {j} do not bound a parallel clasp")


def parallel_clasps(d: Diagram) -> List[ClaspSite]:
    out = []
    for i, j, kind in _bigons(d):
        if kind == "parallel" and i < j:
            try:
                out.append(clasp_site(d, i, j))
            except SurgeryError:
                pass
    return out


# ---------------------------------------------------------------------------
# the replacement tangles


def _column(b, a):
    return _tg._reflect(_tg._render(b, _tg.Integer(a)))


def _stack(b, top, bottom):
    b.uf.union(top.ends["SW"], bottom.ends["NW"])
    b.uf.union(top.ends["SE"], bottom.ends["NE"])
    return _tg._T(top.xs + bottom.xs, {"NW": top.ends["NW"], "NE": top.ends["NE"],
                                        "SW": bottom.ends["SW"], "SE": bottom.ends["SE"]})


def pretzel_tangle(p: int, q: int, r: int, mirrored: bool = False):
    """The (p+1, q, r) pretzel diagram with one crossing of its first
    column cut out; returns unoriented crossings and the labels at the
    four corners of the hole."""
    b = _tg._Builder()
    hole = _tg._T([], {k: b.fresh() for k in ("NW", "NE", "SW", "SE")})
    corners = dict(hole.ends)
    col = _stack(b, hole, _column(b, p)) if p else hole
    t = _tg._add(b, _tg._add(b, col, _column(b, q)), _column(b, r))
    b.uf.union(t.ends["NW"], t.ends["NE"])
    b.uf.union(t.ends["SW"], t.ends["SE"])
    f = b.uf.find
    xs = [tuple(f(a) for a in x) for x in t.xs]
    if mirrored:
        xs = [(x[1], x[2], x[3], x[0]) for x in xs]
    return xs, {k: f(v) for k, v in corners.items()}


# hole corner -> corner of the clasp in its braid frame
_HOLE_TO_FRAME = {"NW": "SE", "SE": "NW", "NE": "NE", "SW": "SW"}


def _orient_like(d: Diagram, kept: Sequence[int], xs, loops) -> Diagram:
    """Orient unoriented ``xs`` (kept crossings first, labels unchanged),
    reversing components so kept crossings mostly agree with ``d``.

    The tangle joins the two incoming ends of the clasp, so part of a
    component may run backwards afterwards; the skein check decides.
    """
    D = _tg._orient(xs, loops, renumber=False)
    comp = D.component_of_arcs()
    votes: Dict[int, int] = {}
    for pos, i in enumerate(kept):
        old, new = d.crossings[i], D.crossings[pos]
        for c, same in ((comp[new.a], new.a == old.a),
                        (comp[new.over_in()], new.over_in() == old.over_in())):
            votes[c] = votes.get(c, 0) + (1 if same else -1)
    flip = [c for c, v in votes.items() if v < 0]
    return D.reverse_components(flip) if flip else D


def _replace(d: Diagram, site: ClaspSite, xs, corners) -> Diagram:
    fb, ft = _frame(d.crossings[site.bottom]), _frame(d.crossings[site.top])
    frame = {"SW": fb["SW"], "SE": fb["SE"], "NW": ft["NW"], "NE": ft["NE"]}
    shift = d.max_arc() + 1
    ren = {lab: frame[_HOLE_TO_FRAME[c]] for c, lab in corners.items()}
    new = [tuple(ren.get(a, a + shift) for a in x) for x in xs]
    kept = [i for i in range(len(d.crossings)) if i not in (site.bottom, site.top)]
    old = [tuple(d.crossings[i][:4]) for i in kept]
    return _orient_like(d, kept, old + new, d.loops)


def apply_tangle_surgery(d: Diagram, site: ClaspSite, t: SurgeryTriple,
                         mirrored: Optional[bool] = None, verify: bool = True) -> Diagram:
    """Replace the clasp at ``site`` by the three-twist tangle of ``t``.

    ``mirrored`` follows the clasp: positive clasps take the mirrored tangle.
    """
    if t.k != site.k:
        raise SurgeryError(f"triple has k={t.k} but the site is an S_{site.k} tangle")
    if mirrored is None:
        mirrored = site.sign > 0
    if (site.sign > 0) != mirrored:
        raise SurgeryError("mirrored tangles go on positive clasps and vice versa")
    out = _replace(d, site, *pretzel_tangle(t.p, t.q, t.r, mirrored))
    if verify:
        before, after = conway_skein(d), conway_skein(out)
        if before != after:
            raise VerificationError(f"surgery changed {before} into {after}")
    return out


def r2_clasp_pair(d: Diagram, i: int) -> Tuple[Diagram, ClaspSite, ClaspSite]:
    """Add a positive and a negative parallel clasp next to crossing ``i``
    (the braid ``s, +, +, -, -`` in place of ``s``)."""
    s = d.crossings[i].sign
    D = replace_by_braid(d, i, [s, 1, 1, -1, -1])
    return D, clasp_site(D, i + 1, i + 2), clasp_site(D, i + 3, i + 4)


def concordance_pair_surgery(d: Diagram, t: SurgeryTriple, i: int = 0) -> Tuple[Diagram, dict]:
    """Add an R2 pair of opposite clasps at crossing ``i`` and do the
    surgery on both, with mirror-image tangles."""
    if not d.crossings:
        d = _tg.closure(_tg.Integer(1)) if d.loops == 1 else d
        if not d.crossings:
            raise SurgeryError("need a crossing to work next to")
    D1, pos, neg = r2_clasp_pair(d, i)
    D2 = apply_tangle_surgery(D1, neg, t, verify=False)
    # pos sits before neg and kept crossings keep their order
    D3 = apply_tangle_surgery(D2, clasp_site(D2, pos.bottom, pos.top), t, verify=False)
    before, after = conway_skein(d), conway_skein(D3)
    if before != after:
        raise VerificationError(f"concordance surgery changed {before} into {after}")
    chi0, chi1 = validate(d).chi, validate(D3).chi
    return D3, {"chi_before": chi0, "chi_after": chi1, "chi_drop": chi0 - chi1,
                "genus_growth": validate(D3).genus - validate(d).genus,
                "slice_chi": "unchanged (annotation, not checked)"}


# ---------------------------------------------------------------------------
# claspings and full twists


def clasping(d: Diagram, i: int, sign: int) -> Tuple[Diagram, dict]:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    out = clasp(d, i, sign)
    meta = {"components_before": d.n_components, "components_after": out.n_components,
            "hopf_plumbing": True}
    return out, meta


@dataclass(frozen=True)
class StrandPair:
    """Two arcs on a common face, seen in a frame with the face between
    them: ``east`` on the right, ``west`` on the left, each running up or
    down.  Both up means parallel strands."""

    east: int
    west: int
    east_up: bool = True
    west_up: bool = True

    @property
    def parallel(self) -> bool:
        return self.east_up == self.west_up


def parallel_strand_pairs(d: Diagram, antiparallel: bool = True) -> List[StrandPair]:
    """Strand pairs sharing a face.  A dart with the face on its left runs
    up on the east side or down on the west side."""
    seen = set()
    out = []
    for face in _faces(d):
        darts = [(d.crossings[i][k], _leaves(d.crossings[i], k)) for i, k in face]
        for a, fa in darts:
            for b, fb in darts:
                if a == b:
                    continue
                if fa != fb:
                    # the face-on-left dart goes up on the east
                    p = StrandPair(a, b) if fa else None
                elif antiparallel and a < b:
                    p = StrandPair(a, b, True, False) if fa else StrandPair(b, a, False, True)
                else:
                    p = None
                if p is not None and p not in seen:
                    seen.add(p)
                    out.append(p)
    return out


def _insert_twist(d: Diagram, pair: StrandPair, signs: Sequence[int]) -> Diagram:
    """Stack crossings between the two arcs of ``pair`` in its frame.
    Both arcs are cut; the head half of each gets a new label."""
    if pair not in parallel_strand_pairs(d):
        raise SurgeryError(f"arcs {pair.east}, {pair.west} are not a strand pair on a face")
    nxt = d.max_arc() + 1
    e_head, w_head = nxt, nxt + 1
    nxt += 2
    xs = []
    for x in d.crossings:
        vals = list(x[:4])
        for slot in range(4):
            if not _leaves(x, slot):
                if vals[slot] == pair.east:
                    vals[slot] = e_head
                elif vals[slot] == pair.west:
                    vals[slot] = w_head
        xs.append(Crossing(*vals, x.sign))
    # (bottom, top) label of each side
    west = (pair.west, w_head) if pair.west_up else (w_head, pair.west)
    east = (pair.east, e_head) if pair.east_up else (e_head, pair.east)
    levels = [(west[0], east[0])]
    for _ in range(len(signs) - 1):
        levels.append((nxt, nxt + 1))
        nxt += 2
    levels.append((west[1], east[1]))
    east_side = True            # where the east arc is at the current level
    new = []
    for k, s in enumerate(signs):
        (bl, br), (tl, tr) = levels[k], levels[k + 1]
        arcs = {"SW": bl, "SE": br, "NW": tl, "NE": tr}
        e = ("SE", "NW") if east_side else ("SW", "NE")
        w = ("SW", "NE") if east_side else ("SE", "NW")
        if not pair.east_up:
            e = e[::-1]
        if not pair.west_up:
            w = w[::-1]
        new.append(_local_crossing(arcs, e, w, s))
        east_side = not east_side
    return Diagram(tuple(xs) + tuple(new), d.loops)


def stallings_full_twist(d: Diagram, pair: StrandPair, sense: int) -> Tuple[Diagram, ConwayPoly]:
    """Full twist of two strands on a common face.

    ``residual = sense * z * nabla(result with its first new crossing
    smoothed)``, so that ``nabla(result) = nabla(d) + residual``.
    """
    if sense not in (1, -1):
        raise ValueError("sense must be +1 or -1")
    out = _insert_twist(d, pair, [sense, sense])
    residual = Z * conway_skein(out.smooth(len(d.crossings))) * sense
    if conway_skein(out) != conway_skein(d) + residual:
        raise VerificationError("skein identity failed for the full twist")
    return out, residual


# ---------------------------------------------------------------------------
# families


@dataclass
class FamilySpec:
    base: RealizedLink
    site: object
    parameters: List[object] = field(default_factory=list)
    members: List[Diagram] = field(default_factory=list)
    notes: List[dict] = field(default_factory=list)

    def json_lines(self) -> Iterator[str]:
        for param, D, note in zip(self.parameters, self.members, self.notes):
            rec = {"pd": [list(x[:4]) for x in D.renumbered().crossings],
                   "signs": list(D.renumbered().signs()),
                   "parameters": param, "verified": True}
            rec.update(note)
            yield json.dumps(rec, sort_keys=True)


def connected_sum(d1: Diagram, arc1: int, d2: Diagram, arc2: int) -> Tuple[Diagram, Tuple[int, int]]:
    """Band ``d1`` and ``d2`` together at the given arcs.

    Returns the sum and the two connecting arcs (``arc1`` now runs into
    ``d2`` and the shifted ``arc2`` back into ``d1``).
    """
    shift = d1.max_arc()
    moved = Diagram(tuple(Crossing(*(v + shift for v in x[:4]), x.sign) for x in d2.crossings))
    b = arc2 + shift
    xs = []
    for x in d1.crossings + moved.crossings:
        vals = list(x[:4])
        for slot in range(4):
            if not _leaves(x, slot):
                if vals[slot] == arc1:
                    vals[slot] = b
                elif vals[slot] == b:
                    vals[slot] = arc1
        xs.append(Crossing(*vals, x.sign))
    return Diagram(tuple(xs), d1.loops + d2.loops), (arc1, b)


def mirror_double(base: RealizedLink) -> Tuple[Diagram, StrandPair]:
    """``K # !K`` joined at the clasp ``*`` of a realized knot, with the
    twist site between the joining arcs (its smoothing has nabla 0)."""
    if base.components != 1 or not base.sites.get("clasp_star"):
        raise SurgeryError("needs a realized knot with a marked clasp")
    site = clasp_site(base.diagram, *base.sites["clasp_star"])
    arc = base.diagram.crossings[site.bottom].c
    D, arcs = connected_sum(base.diagram, arc, base.diagram.mirror(), arc)
    pair = connected_sum_site(D, arcs)
    if pair is None:
        raise SurgeryError("no twist site at the connected sum")
    return D, pair


def _zero_residual(d: Diagram, pairs) -> Optional[StrandPair]:
    for pair in pairs:
        if stallings_full_twist(d, pair, 1)[1].is_zero():
            return pair
    return None


def connected_sum_site(d: Diagram, arcs: Tuple[int, int]) -> Optional[StrandPair]:
    """Twist site between the two arcs joining the summands."""
    return _zero_residual(d, [p for p in parallel_strand_pairs(d) if {p.east, p.west} == set(arcs)])


def stallings_site(base: RealizedLink) -> Optional[StrandPair]:
    """Twist site inside the component made by two opposite claspings.

    The twisting circle runs parallel to that component; its disc meets
    the two clasping strands, which share the face the component bounds.
    """
    D = base.diagram
    cl, sg = base.sites.get("claspings") or [], base.sites.get("clasp_signs") or []
    comp = D.component_of_arcs()

    def comps(i):
        return {comp[D.crossings[i].a], comp[D.crossings[i].over_in()]}

    for (i, s), (j, t) in zip(zip(cl, sg), list(zip(cl, sg))[1:]):
        if s == t:
            continue
        common = comps(i) & comps(j)
        if len(common) != 1:
            continue
        C = common.pop()
        cands = [p for p in parallel_strand_pairs(D)
                 if comp[p.east] != C and comp[p.west] != C and comp[p.east] != comp[p.west]
                 and _on_face_of(D, p, C)]
        pair = _zero_residual(D, cands)
        if pair is not None:
            return pair
    return None


def _on_face_of(d: Diagram, pair: StrandPair, C: int) -> bool:
    comp = d.component_of_arcs()
    for face in _faces(d):
        arcs = [d.crossings[i][k] for i, k in face]
        if pair.east in arcs and pair.west in arcs and sum(comp[a] == C for a in arcs) >= 2:
            return True
    return False


def enumerate_family(base: RealizedLink, count: int, mode: Optional[str] = None) -> FamilySpec:
    """``count`` polynomial-preserving rewrites of ``base``.

    ``mode="surgery"`` uses the k=1 triples for n = 1..count at a parallel
    clasp; ``mode="stallings"`` iterates full twists at a twist site.  The
    default picks surgery when a clasp is marked, else Stallings twists.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    D = base.diagram
    clasps = _marked_clasps(base)
    if mode is None:
        mode = "surgery" if clasps else "stallings"
    if count == 0:
        return FamilySpec(base, None)
    target = conway_skein(D)
    if mode == "surgery":
        if not clasps:
            raise SurgeryError("no marked parallel clasp")
        site = clasps[0]
        fam = FamilySpec(base, site.to_json())
        for n in range(1, count + 1):
            t = surgery_triples(1, n)
            M = apply_tangle_surgery(D, site, t)
            fam.parameters.append(t.to_json())
            fam.members.append(M)
            fam.notes.append({"twists": [t.p, t.q, t.r]})
        return fam
    pair = stallings_site(base)
    if pair is None:
        raise SurgeryError("no Stallings twist site (needs two opposite claspings)")
    comp = D.component_of_arcs()
    ci, cj = comp[pair.east], comp[pair.west]
    fam = FamilySpec(base, {"east": pair.east, "west": pair.west})
    for m in range(1, count + 1):
        M = _insert_twist(D, pair, [1] * (2 * m))
        if conway_skein(M) != target:
            raise VerificationError("Stallings twist changed the polynomial")
        fam.parameters.append({"full_twists": m})
        fam.members.append(M)
        fam.notes.append({"twisted_components": [ci, cj],
                          "twisted_linking_number": linking_number(M, min(ci, cj), max(ci, cj)),
                          "linking_numbers": _lk_list(M)})
    return fam


def _lk_list(D: Diagram):
    return [[i, j, v] for (i, j), v in sorted(linking_graph(D).edges.items())] if D.n_components > 1 else []


def _marked_clasps(base: RealizedLink) -> List[ClaspSite]:
    D = base.diagram
    out = []
    star = base.sites.get("clasp_star")
    if star:
        out.append(clasp_site(D, *star))
    for i in base.sites.get("claspings", []) or []:
        out.append(clasp_site(D, i, i + 1))
    return out
