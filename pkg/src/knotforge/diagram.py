"""Oriented link diagrams as planar-diagram (PD) codes.

A crossing ``X[a,b,c,d]`` lists its four arcs counterclockwise, starting at
the incoming under-arc ``a`` (so ``c`` is the outgoing under-arc).  The over
strand runs ``d -> b`` at a positive crossing and ``b -> d`` at a negative
one.  Arc labels are arbitrary hashable integers; :meth:`Diagram.renumbered`
relabels them ``1..2c`` in traversal order.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .poly import ConwayPoly, IntLaurent, conway_to_alexander, poly_det

# V0 = vol(4_1)/2, the volume of the regular ideal tetrahedron.
V0 = 1.014941606409653625

DEFAULT_LIMIT = 64


class DiagramError(ValueError):
    """Malformed PD data; ``crossing`` is the offending index when known."""

    def __init__(self, message, crossing=None):
        super().__init__(message)
        self.crossing = crossing


class ResourceLimitError(RuntimeError):
    def __init__(self, crossings, limit):
        super().__init__(f"diagram has {crossings} crossings; evaluator limit is {limit}")
        self.crossings = crossings
        self.limit = limit


class Crossing(NamedTuple):
    a: int
    b: int
    c: int
    d: int
    sign: int

    @property
    def arcs(self):
        return (self.a, self.b, self.c, self.d)

    def over_in(self):
        return self.d if self.sign > 0 else self.b

    def over_out(self):
        return self.b if self.sign > 0 else self.d

    def switched(self) -> "Crossing":
        a, b, c, d, s = self
        if s > 0:
            return Crossing(d, a, b, c, -1)
        return Crossing(b, c, d, a, 1)


@dataclass(frozen=True)
class SeifertData:
    s: int
    c: int
    chi: int
    genus: int
    components: int

    def to_json(self) -> dict:
        return {"seifert_circles": self.s, "crossings": self.c, "chi": self.chi,
                "genus": self.genus, "components": self.components}


@dataclass(frozen=True)
class LinkingGraph:
    vertices: Tuple[int, ...]
    edges: Dict[Tuple[int, int], int]

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def is_connected(self, removed=()) -> bool:
        verts = [v for v in self.vertices if v not in removed]
        if not verts:
            return True
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for (i, j) in self.edges:
                if i in removed or j in removed:
                    continue
                for x, y in ((i, j), (j, i)):
                    if x == v and y not in seen:
                        seen.add(y)
                        stack.append(y)
        return len(seen) == len(verts)

    def cut_vertices(self) -> List[int]:
        if not self.is_connected():
            return []
        return [v for v in self.vertices if len(self.vertices) > 2 and not self.is_connected((v,))]

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [[i, j, lk] for (i, j), lk in sorted(self.edges.items())]}


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent
        root = x
        while p.get(root, root) != root:
            root = p[root]
        while p.get(x, x) != root:
            p[x], x = root, p[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx
        return rx


def _remove_and_join(crossings, loops, drop, joins):
    """Delete crossings ``drop`` and glue arcs pairwise along ``joins``.

    Returns ``(crossings, loops)``; glued arcs that no longer touch any
    crossing become free loops.
    """
    uf = _UnionFind()
    touched = set()
    for p, q in joins:
        uf.union(p, q)
        touched.add(p)
        touched.add(q)
    kept = []
    present = set()
    for i, x in enumerate(crossings):
        if i in drop:
            continue
        a, b, c, d, s = x
        x = Crossing(uf.find(a), uf.find(b), uf.find(c), uf.find(d), s)
        kept.append(x)
        present.update(x[:4])
    roots = {uf.find(t) for t in touched}
    loops += sum(1 for r in roots if r not in present)
    return tuple(kept), loops


@dataclass(frozen=True)
class Diagram:
    """An oriented link diagram.

    ``loops`` counts crossingless unknotted components.  The empty diagram
    with ``loops=1`` is the unknot.
    """

    crossings: Tuple[Crossing, ...] = ()
    loops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(Crossing(*x) for x in self.crossings))

    # -- construction -----------------------------------------------------
    @classmethod
    def unknot(cls) -> "Diagram":
        return cls((), 1)

    @classmethod
    def unlink(cls, n: int) -> "Diagram":
        return cls((), n)

    @classmethod
    def from_pd(cls, pd: Iterable[Sequence[int]], signs: Optional[Sequence[int]] = None,
                loops: int = 0) -> "Diagram":
        """Build from 4-tuples, optionally with explicit signs.

        Without signs the KnotTheory convention is used: arcs are numbered
        along each component, so the over strand runs ``l -> j`` exactly when
        ``j == l + 1`` modulo the component.
        """
        pd = [tuple(x) for x in pd]
        if signs is None:
            signs = _signs_from_numbering(pd)
        return cls(tuple(Crossing(*x, s) for x, s in zip(pd, signs)), loops)

    # -- basic data -------------------------------------------------------
    def __len__(self):
        return len(self.crossings)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def signs(self) -> Tuple[int, ...]:
        return tuple(x.sign for x in self.crossings)

    def writhe(self) -> int:
        return sum(self.signs())

    def _check_index(self, i):
        if not 0 <= i < len(self.crossings):
            raise IndexError(f"crossing index {i} out of range for {len(self.crossings)} crossings")

    def successor(self) -> Dict[int, int]:
        nxt = {}
        for x in self.crossings:
            nxt[x.a] = x.c
            nxt[x.over_in()] = x.over_out()
        return nxt

    def components(self) -> List[List[int]]:
        """Arc sequences of the components that meet crossings, in order."""
        nxt = self.successor()
        seen = set()
        comps = []
        for x in self.crossings:
            for start in (x.a, x.over_in()):
                if start in seen:
                    continue
                comp = []
                arc = start
                while arc not in seen:
                    seen.add(arc)
                    comp.append(arc)
                    arc = nxt[arc]
                comps.append(comp)
        return comps

    @property
    def n_components(self) -> int:
        return len(self.components()) + self.loops

    def component_of_arcs(self) -> Dict[int, int]:
        out = {}
        for k, comp in enumerate(self.components()):
            for arc in comp:
                out[arc] = k
        return out

    def crossing_components(self, i) -> Tuple[int, int]:
        """(under component, over component) at crossing ``i``."""
        self._check_index(i)
        comp = self.component_of_arcs()
        x = self.crossings[i]
        return comp[x.a], comp[x.b]

    def renumbered(self) -> "Diagram":
        """Relabel arcs ``1..2c`` following each component in turn."""
        mapping = {}
        k = 1
        for comp in self.components():
            for arc in comp:
                mapping[arc] = k
                k += 1
        return Diagram(tuple(Crossing(mapping[x.a], mapping[x.b], mapping[x.c], mapping[x.d], x.sign)
                             for x in self.crossings), self.loops)

    # -- local moves ------------------------------------------------------
    def mirror(self) -> "Diagram":
        return Diagram(tuple(x.switched() for x in self.crossings), self.loops)

    def switch(self, i: int) -> "Diagram":
        self._check_index(i)
        xs = list(self.crossings)
        xs[i] = xs[i].switched()
        return Diagram(tuple(xs), self.loops)

    def smooth(self, i: int) -> "Diagram":
        """Oriented smoothing of crossing ``i``; the crossing is deleted."""
        self._check_index(i)
        x = self.crossings[i]
        xs, loops = _remove_and_join(self.crossings, self.loops, {i},
                                     [(x.a, x.over_out()), (x.over_in(), x.c)])
        return Diagram(xs, loops)

    def reverse_components(self, which: Iterable[int]) -> "Diagram":
        """Reverse the orientation of the listed components (indices as in
        :meth:`components`).  Crossings between a reversed and a kept
        component change sign."""
        comp = self.component_of_arcs()
        which = set(which)
        xs = []
        for x in self.crossings:
            ru = comp[x.a] in which
            ro = comp[x.b] in which
            a, b, c, d = (x.c, x.d, x.a, x.b) if ru else x[:4]
            xs.append(Crossing(a, b, c, d, -x.sign if ru != ro else x.sign))
        return Diagram(tuple(xs), self.loops)

    def disjoint_union(self, other: "Diagram") -> "Diagram":
        shift = 1 + max((max(x[:4]) for x in self.crossings), default=0)
        moved = tuple(Crossing(x.a + shift, x.b + shift, x.c + shift, x.d + shift, x.sign)
                      for x in other.crossings)
        return Diagram(self.crossings + moved, self.loops + other.loops)

    def max_arc(self) -> int:
        return max((max(x[:4]) for x in self.crossings), default=0)

    # -- text I/O ---------------------------------------------------------
    def to_pd_text(self) -> str:
        d = self.renumbered()
        lines = [f"X[{x.a},{x.b},{x.c},{x.d}] {'+1' if x.sign > 0 else '-1'}" for x in d.crossings]
        if d.loops:
            lines.append(f"loops {d.loops}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_pd_text(cls, text: str) -> "Diagram":
        xs = []
        loops = 0
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("X"):
                # several crossings may share a line
                pos = 0
                while pos < len(line):
                    m = _PD_ITEM.match(line, pos)
                    if not m:
                        raise DiagramError(f"line {lineno}: cannot parse {line[pos:]!r}")
                    sign = m.group(5)
                    xs.append(([int(g) for g in m.groups()[:4]], None if sign is None else int(sign)))
                    pos = m.end()
                continue
            m = re.fullmatch(r"loops\s+(\d+)", line)
            if m:
                loops += int(m.group(1))
                continue
            raise DiagramError(f"line {lineno}: cannot parse {line!r}")
        if any(s is None for _, s in xs):
            if not all(s is None for _, s in xs):
                raise DiagramError("either all crossings carry a sign or none does")
            return cls.from_pd([a for a, _ in xs], loops=loops)
        return cls(tuple(Crossing(*a, s) for a, s in xs), loops)

    def to_json(self) -> dict:
        d = self.renumbered()
        return {"pd": [list(x[:4]) for x in d.crossings], "signs": list(d.signs()), "loops": d.loops}


_PD_ITEM = re.compile(r"\s*X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]"
                      r"(?:\s*([+-]1)(?![\d]))?\s*")


def _signs_from_numbering(pd):
    counts = {}
    for x in pd:
        for arc in x:
            counts[arc] = counts.get(arc, 0) + 1
    bad = [a for a, k in counts.items() if k != 2]
    if bad:
        raise DiagramError(f"arc {bad[0]} appears {counts[bad[0]]} times")
    signs = []
    for i, (a, b, c, d) in enumerate(pd):
        # consecutive labels run forward; a jump back marks the wrap-around
        if b - d == 1 or d - b > 1:
            signs.append(1)
        elif d - b == 1 or b - d > 1:
            signs.append(-1)
        else:
            raise DiagramError("cannot infer crossing sign from arc numbering", i)
    return signs


# ---------------------------------------------------------------------------
# validation and Seifert's algorithm


def validate(d: Diagram) -> SeifertData:
    """Check the structural invariants and run Seifert's algorithm."""
    heads: Dict[int, int] = {}
    tails: Dict[int, int] = {}
    for i, x in enumerate(d.crossings):
        if x.sign not in (1, -1):
            raise DiagramError(f"crossing {i} has sign {x.sign}", i)
        for arc in (x.a, x.over_in()):
            if arc in heads:
                raise DiagramError(f"arc {arc} enters two crossings ({heads[arc]} and {i})", i)
            heads[arc] = i
        for arc in (x.c, x.over_out()):
            if arc in tails:
                raise DiagramError(f"arc {arc} leaves two crossings ({tails[arc]} and {i})", i)
            tails[arc] = i
    if set(heads) != set(tails):
        arc = next(iter(set(heads) ^ set(tails)))
        where = heads.get(arc, tails.get(arc))
        raise DiagramError(f"arc {arc} does not have both ends at crossings", where)
    if d.loops < 0:
        raise DiagramError("negative loop count")
    if not d.crossings and d.loops == 0:
        raise DiagramError("empty diagram has no components")
    if d.crossings:
        faces = _faces(d)
        pieces = _pieces(d)
        # each piece is a plane graph with its own outer face
        if len(faces) != len(d.crossings) + 2 * pieces:
            raise DiagramError("PD code is not planar")
    c = len(d.crossings)
    s = seifert_circle_count(d)
    n = d.n_components
    chi = s - c
    # a split diagram has one canonical surface per connected piece
    pieces = (_pieces(d) if d.crossings else 0) + d.loops
    genus = (2 * pieces - n - chi) // 2
    return SeifertData(s=s, c=c, chi=chi, genus=genus, components=n)


def seifert_circle_count(d: Diagram) -> int:
    uf = _UnionFind()
    arcs = set()
    for x in d.crossings:
        uf.union(x.a, x.over_out())
        uf.union(x.over_in(), x.c)
        arcs.update(x[:4])
    return len({uf.find(a) for a in arcs}) + d.loops


def seifert_circles(d: Diagram) -> List[List[int]]:
    """Arcs grouped by the Seifert circle they lie on."""
    uf = _UnionFind()
    arcs = []
    for x in d.crossings:
        uf.union(x.a, x.over_out())
        uf.union(x.over_in(), x.c)
        arcs.extend(x[:4])
    groups: Dict[int, List[int]] = {}
    for a in dict.fromkeys(arcs):
        groups.setdefault(uf.find(a), []).append(a)
    return list(groups.values())


def _pieces(d: Diagram) -> int:
    """Connected pieces of the projection graph (crossing diagram only)."""
    uf = _UnionFind()
    where: Dict[int, int] = {}
    for i, x in enumerate(d.crossings):
        uf.find(i)
        for arc in x[:4]:
            if arc in where:
                uf.union(where[arc], i)
            else:
                where[arc] = i
    return len({uf.find(i) for i in range(len(d.crossings))})


def is_split_diagram(d: Diagram) -> bool:
    if not d.crossings:
        return d.loops > 1
    return d.loops > 0 or _pieces(d) > 1


def _slot_index(d: Diagram):
    """arc -> list of (crossing, slot) occurrences."""
    occ: Dict[int, List[Tuple[int, int]]] = {}
    for i, x in enumerate(d.crossings):
        for k in range(4):
            occ.setdefault(x[k], []).append((i, k))
    return occ


def _faces(d: Diagram) -> List[List[Tuple[int, int]]]:
    """Faces as cyclic lists of corners ``(crossing, slot)``.

    Walking along the arc leaving slot ``k`` of crossing ``i`` and arriving
    at slot ``m`` of crossing ``j``, the face on the left continues out of
    slot ``m - 1``.
    """
    occ = _slot_index(d)
    other = {}
    for arc, ends in occ.items():
        (i, k), (j, m) = ends
        other[(i, k)] = (j, m)
        other[(j, m)] = (i, k)
    seen = set()
    faces = []
    for i in range(len(d.crossings)):
        for k in range(4):
            if (i, k) in seen:
                continue
            face = []
            dart = (i, k)
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                j, m = other[dart]
                dart = (j, (m - 1) % 4)
            faces.append(face)
    return faces


# ---------------------------------------------------------------------------
# signs, linking


def crossing_sign(d: Diagram, i: int) -> int:
    d._check_index(i)
    return d.crossings[i].sign


def mirror(d: Diagram) -> Diagram:
    return d.mirror()


def switch(d: Diagram, i: int) -> Diagram:
    return d.switch(i)


def smooth(d: Diagram, i: int) -> Diagram:
    return d.smooth(i)


def linking_number(d: Diagram, i: int, j: int) -> int:
    if i == j:
        raise ValueError("linking number needs two distinct components")
    comps = d.components()
    n = len(comps) + d.loops
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"component index out of range for {n} components")
    comp = {}
    for k, arcs in enumerate(comps):
        for arc in arcs:
            comp[arc] = k
    total = 0
    for x in d.crossings:
        pair = {comp[x.a], comp[x.b]}
        if pair == {i, j}:
            total += x.sign
    return total // 2


def linking_graph(d: Diagram) -> LinkingGraph:
    n = d.n_components
    if n < 2:
        raise ValueError("linking graph needs at least two components")
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            lk = linking_number(d, i, j)
            if lk:
                edges[(i, j)] = lk
    return LinkingGraph(tuple(range(n)), edges)


# ---------------------------------------------------------------------------
# twists


def _leaves(x: Crossing, slot: int) -> bool:
    return slot == 2 or (slot == 1 and x.sign > 0) or (slot == 3 and x.sign < 0)


def _bigons(d: Diagram):
    """Pairs of distinct crossings bounding a bigon face, with the clasp type.

    A reverse clasp has its two boundary arcs running coherently around the
    bigon (the bigon is a Seifert circle); otherwise the clasp is parallel.
    """
    out = []
    for face in _faces(d):
        if len(face) != 2:
            continue
        (i, k), (j, m) = face
        if i == j:
            continue
        fwd1 = _leaves(d.crossings[i], k)
        fwd2 = _leaves(d.crossings[j], m)
        out.append((i, j, "reverse" if fwd1 == fwd2 else "parallel"))
    return out


def twist_classes(d: Diagram) -> Tuple[int, int]:
    """``(t_strong_reverse, t_strong)`` by literal clasp chains.

    Crossings joined by a reverse bigon are reverse-twist equivalent; any
    bigon makes them twist equivalent.  The 2-crossing Hopf diagram counts as
    a single twist.
    """
    c = len(d.crossings)
    if c == 0:
        return (0, 0)
    rev = _UnionFind()
    any_ = _UnionFind()
    for i in range(c):
        rev.find(i)
        any_.find(i)
    for i, j, kind in _bigons(d):
        any_.union(i, j)
        if kind == "reverse":
            rev.union(i, j)
    t_rev = len({rev.find(i) for i in range(c)})
    t = len({any_.find(i) for i in range(c)})
    if is_hopf_diagram(d):
        return (1, 1)
    return t_rev, t


def is_hopf_diagram(d: Diagram) -> bool:
    if len(d.crossings) != 2 or d.loops:
        return False
    return len(d.components()) == 2


def twist_number(d: Diagram) -> int:
    return twist_classes(d)[1]


def volume_bound(d: Diagram) -> float:
    """Upper bound ``10 V0 (t(D) - 1)`` on the hyperbolic volume."""
    if not d.crossings:
        raise ValueError("volume bound needs a diagram with at least one crossing")
    return 10 * V0 * (twist_number(d) - 1)


# ---------------------------------------------------------------------------
# Alexander polynomial by Fox calculus on the Wirtinger presentation


def alexander_det(d: Diagram) -> IntLaurent:
    """Alexander polynomial up to units ``+-u^k``, via a Wirtinger matrix minor.

    The result is centred (symmetric exponent range) with positive leading
    coefficient.  Independent of the skein evaluator.
    """
    if is_split_diagram(d):
        raise DiagramError("alexander_det needs a connected diagram")
    if not d.crossings:
        return IntLaurent.constant(1)
    uf = _UnionFind()
    for x in d.crossings:
        uf.union(x.over_in(), x.over_out())
    gens = sorted({uf.find(a) for x in d.crossings for a in x[:4]})
    col = {g: k for k, g in enumerate(gens)}
    c = len(d.crossings)
    # entries are polynomials in t given as coefficient lists [c0, c1]
    rows = []
    for x in d.crossings:
        row = [[0, 0] for _ in gens]
        k = col[uf.find(x.b)]
        i_ = col[uf.find(x.a)]
        j_ = col[uf.find(x.c)]
        if x.sign > 0:
            # in: t, out: -1, over: 1 - t
            row[i_][1] += 1
            row[j_][0] -= 1
            row[k][0] += 1
            row[k][1] -= 1
        else:
            # multiplied by t: in: 1, out: -t, over: t - 1
            row[i_][0] += 1
            row[j_][1] -= 1
            row[k][0] -= 1
            row[k][1] += 1
        rows.append(row)
    m = len(gens)
    if m > c:
        # some component never goes under: it lifts off, the link is split
        return IntLaurent()
    minor = [r[1:] for r in rows[1:]]
    if m - 1 != c - 1:
        raise DiagramError("Wirtinger matrix is not square after reduction")
    det = poly_det(minor)
    lau = IntLaurent({2 * e: v for e, v in enumerate(det)})
    if lau.is_zero():
        return lau
    return _symmetrize(lau)


def _symmetrize(lau: IntLaurent) -> IntLaurent:
    lo, hi, _, lead = lau.degrees()
    shifted = lau.shift(-((lo + hi) // 2) if (lo + hi) % 2 == 0 else -lo)
    return -shifted if lead < 0 else shifted


def equal_up_to_units(p: IntLaurent, q: IntLaurent) -> bool:
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    (plo, phi, _, plead), (qlo, qhi, _, qlead) = p.degrees(), q.degrees()
    if phi - plo != qhi - qlo:
        return False
    sp = p.shift(-plo)
    sq = q.shift(-qlo)
    return sp == sq or sp == -sq


def strict_alexander(d: Diagram) -> Tuple[IntLaurent, bool]:
    """Determinant route normalized as far as possible.

    Returns ``(delta, exact)``: for knots the symmetric form with
    ``Delta(1) = 1`` is exact; for links the sign stays undetermined.
    """
    lau = alexander_det(d)
    if lau.is_zero():
        return lau, True
    if d.n_components == 1:
        if lau.at_one() < 0:
            lau = -lau
        return lau, True
    return lau, False


# ---------------------------------------------------------------------------
# Conway polynomial by the skein relation


def evaluator_limit() -> int:
    env = os.environ.get("KNOTFORGE_LIMIT")
    return int(env) if env else DEFAULT_LIMIT


def conway_skein(d: Diagram, limit: Optional[int] = None) -> ConwayPoly:
    """Normalized Conway polynomial, computed from the skein relation.

    Recursion on the first crossing met from below in a based traversal;
    a descending diagram is an unlink.  Kinks and removable bigons are
    cleared before each step and results are memoized by a canonical code,
    so twist regions cost linear work.
    """
    from . import _skein

    limit = evaluator_limit() if limit is None else limit
    if len(d.crossings) > limit:
        raise ResourceLimitError(len(d.crossings), limit)
    coeffs = _skein.evaluate(d.crossings, d.loops)
    return ConwayPoly({e: c for e, c in enumerate(coeffs) if c})


def bound_report(d: Diagram) -> dict:
    t_rev, t = twist_classes(d)
    return {"t_strong_reverse": t_rev, "t_strong": t,
            "volume_bound": 10 * V0 * (t - 1) if d.crossings else None,
            "hopf_exception": is_hopf_diagram(d)}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ---------------------------------------------------------------------------
# diagrams from planar Seifert graphs


def from_seifert_graph(edges: Dict, rotation: Dict) -> Diagram:
    return seifert_graph_diagram(edges, rotation)[0]


def seifert_graph_diagram(edges: Dict, rotation: Dict) -> Tuple[Diagram, List]:
    """Special diagram whose Seifert circles are the vertices of a plane graph.

    ``edges`` maps an edge id to ``(u, v, label)``: a band of ``|label|``
    reverse half twists of crossing sign ``sgn(label)``, i.e. a path of
    ``|label|`` crossings through ``|label| - 1`` valence-2 circles.
    ``rotation`` lists each vertex's edge ids counterclockwise.  The graph
    must be connected, planar with this rotation, and bipartite once labels
    are expanded.  Also returns the edge id behind each crossing.
    """
    # expand labels into single-crossing edges
    rot: Dict = {v: [] for v in rotation}
    single: Dict = {}
    ends: Dict = {}
    for eid, (u, v, label) in edges.items():
        if label == 0:
            raise ValueError(f"edge {eid!r} has label 0")
        s = 1 if label > 0 else -1
        chain = [u] + [("mid", eid, k) for k in range(1, abs(label))] + [v]
        ids = [(eid, k) for k in range(abs(label))]
        for k, sub in enumerate(ids):
            single[sub] = (chain[k], chain[k + 1], s)
        ends[eid] = (ids[0], ids[-1])
        for k in range(1, abs(label)):
            rot[chain[k]] = [ids[k - 1], ids[k]]
    for v, order in rotation.items():
        for eid in order:
            u, w, _ = edges[eid]
            if u == w:
                raise ValueError(f"edge {eid!r} is a loop")
            first, last = ends[eid]
            rot[v].append(first if v == u else last)
    # two-colour the circles: adjacent circles carry opposite orientations
    colour = {}
    start = next(iter(rotation))
    colour[start] = 0
    stack = [start]
    adj: Dict = {}
    for sub, (u, v, _) in single.items():
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    while stack:
        v = stack.pop()
        for w in adj.get(v, []):
            if w not in colour:
                colour[w] = 1 - colour[v]
                stack.append(w)
            elif colour[w] == colour[v]:
                raise ValueError("Seifert graph is not bipartite")
    if len(colour) != len(rot):
        raise ValueError("Seifert graph is not connected")
    arc_id: Dict = {}

    def arc(v, i):
        key = (v, i % len(rot[v]))
        if key not in arc_id:
            arc_id[key] = len(arc_id) + 1
        return arc_id[key]

    pos = {(v, e): i for v, order in rot.items() for i, e in enumerate(order)}
    xs = []
    tags = []
    for sub, (u, v, s) in single.items():
        tags.append(sub[0])
        if colour[u] == 1:
            u, v = v, u
        i, j = pos[(u, sub)], pos[(v, sub)]
        sw, nw = arc(u, i - 1), arc(u, i)
        se, ne = arc(v, j), arc(v, j - 1)
        if s > 0:
            xs.append(Crossing(se, ne, nw, sw, 1))
        else:
            xs.append(Crossing(sw, se, ne, nw, -1))
    return Diagram(tuple(xs)).renumbered(), tags


_POS = {"NE": (1, 1), "NW": (-1, 1), "SW": (-1, -1), "SE": (1, -1)}
_CCW = ("NE", "NW", "SW", "SE")


def _local_crossing(arcs: Dict[str, int], p: Tuple[str, str], q: Tuple[str, str], sign: int) -> Crossing:
    """Crossing with strands ``p`` and ``q`` (from, to corner), of the given sign.

    The over strand is whichever makes ``over x under`` point the right way.
    """
    def vec(strand):
        (x0, y0), (x1, y1) = _POS[strand[0]], _POS[strand[1]]
        return x1 - x0, y1 - y0

    (ox, oy), (ux, uy) = vec(p), vec(q)
    over, under = (p, q) if (ox * uy - oy * ux) * sign > 0 else (q, p)
    k = _CCW.index(under[0])
    a, b, c, d = (arcs[_CCW[(k + j) % 4]] for j in range(4))
    return Crossing(a, b, c, d, sign)


def _frame(x: Crossing) -> Dict[str, int]:
    """Corners of ``x`` with its strands running SW->NE and SE->NW."""
    if x.sign > 0:
        return {"NE": x.b, "NW": x.c, "SW": x.d, "SE": x.a}
    return {"NE": x.c, "NW": x.d, "SW": x.a, "SE": x.b}


def replace_by_twist(d: Diagram, i: int, signs: Sequence[int], reverse: bool = False) -> Diagram:
    """Replace crossing ``i`` by a row of crossings with the given signs.

    With ``reverse=False`` the row is stacked bottom to top along the
    direction both strands travel (a braid: ``[]`` smooths, ``[s, s]`` with
    ``s`` the sign of a crossing is a clasping).  With ``reverse=True`` it is
    laid out west to east, where the strands run against each other (a
    reverse twist); the length must then be odd.
    """
    d._check_index(i)
    if not signs:
        if reverse:
            raise ValueError("a reverse twist row must have odd length")
        return d.smooth(i)
    if reverse and len(signs) % 2 == 0:
        raise ValueError("a reverse twist row must have odd length")
    corners = _frame(d.crossings[i])
    nxt = d.max_arc() + 1
    new = []
    m = len(signs)
    if not reverse:
        left, right = corners["SW"], corners["SE"]
        for k, s in enumerate(signs):
            if k == m - 1:
                tl, tr = corners["NW"], corners["NE"]
            else:
                tl, tr, nxt = nxt, nxt + 1, nxt + 2
            arcs = {"SW": left, "SE": right, "NW": tl, "NE": tr}
            new.append(_local_crossing(arcs, ("SW", "NE"), ("SE", "NW"), s))
            left, right = tl, tr
    else:
        west_top, west_bot = corners["NW"], corners["SW"]
        for k, s in enumerate(signs):
            if k == m - 1:
                et, eb = corners["NE"], corners["SE"]
            else:
                et, eb, nxt = nxt, nxt + 1, nxt + 2
            arcs = {"NW": west_top, "SW": west_bot, "NE": et, "SE": eb}
            if k % 2 == 0:
                new.append(_local_crossing(arcs, ("SW", "NE"), ("SE", "NW"), s))
            else:
                new.append(_local_crossing(arcs, ("NW", "SE"), ("NE", "SW"), s))
            west_top, west_bot = et, eb
    xs = d.crossings[:i] + tuple(new) + d.crossings[i + 1:]
    return Diagram(xs, d.loops)


def replace_by_braid(d: Diagram, i: int, word: Sequence[int]) -> Diagram:
    return replace_by_twist(d, i, word, reverse=False)


def clasp(d: Diagram, i: int, sign: int) -> Diagram:
    """Replace crossing ``i`` by a parallel clasp of two ``sign`` crossings."""
    return replace_by_braid(d, i, [sign, sign])


def insert_r2(d: Diagram, i: int, reverse: bool = False) -> Diagram:
    """Put an R2 pair next to crossing ``i`` (same link, two more crossings)."""
    s = d.crossings[i].sign
    return replace_by_twist(d, i, [s, -s, s], reverse=reverse)
