"""Conway notation, continued fractions, Montesinos forms, tangle diagrams.

Grammar (whitespace between atoms is optional unless needed to separate
two numbers)::

    expr    := ram
    ram     := prod ("," prod)*          -- two or more: Ramification
    prod    := atom atom*                -- two or more: Product (left assoc.)
    atom    := INT | "oo" | "(" ram ")"
    INT     := [+-] DIGIT+  |  DIGIT     -- an unsigned run "213" is 2 1 3

Integers of absolute value 10 or more therefore need an explicit sign
(``+12``, ``-12``).  The printer writes runs of unsigned one-digit entries
without spaces and is an exact inverse of the parser.

Tangle algebra: ``X + Y`` glues X.NE to Y.NW and X.SE to Y.SW; the product
``X Y`` is ``X`` reflected in the NW-SE diagonal plus ``Y``, so fractions
obey ``F(X Y) = F(Y) + 1/F(X)``; ``X, Y, ...`` is ``X 0 + Y 0 + ...``.  The
closure joins NW to NE and SW to SE.
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .diagram import Crossing, Diagram


class ConwaySyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class AmbiguousDigitRun(ConwaySyntaxError):
    """An unsigned multi-digit run met in strict mode."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Integer:
    n: int


@dataclass(frozen=True)
class Infinity:
    pass


@dataclass(frozen=True)
class Product:
    children: Tuple["TangleExpr", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("a product needs at least two factors")


@dataclass(frozen=True)
class Ramification:
    children: Tuple["TangleExpr", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("a ramification needs at least two entries")


@dataclass(frozen=True)
class Closure:
    child: "TangleExpr"


TangleExpr = Union[Integer, Infinity, Product, Ramification, Closure]


def product(items: Sequence[TangleExpr]) -> TangleExpr:
    items = list(items)
    if not items:
        raise ValueError("empty product")
    if len(items) == 1:
        return items[0]
    if isinstance(items[0], Product):
        items = list(items[0].children) + items[1:]
    return Product(tuple(items))


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(?P<signed>[+-]\d+)|(?P<digits>\d+)|(?P<inf>oo)|(?P<punct>[(),]))")


def _tokenize(text: str, strict: bool):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ConwaySyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        if m.group("signed"):
            out.append(("int", int(m.group("signed")), start))
        elif m.group("digits"):
            run = m.group("digits")
            if strict and len(run) > 1:
                raise AmbiguousDigitRun(f"digit run {run!r} is read as {' '.join(run)}", start)
            for k, ch in enumerate(run):
                out.append(("int", int(ch), start + k))
        elif m.group("inf"):
            out.append(("inf", None, start))
        else:
            out.append((m.group("punct"), None, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[0] if tok[1] is None else tok[1])
            raise ConwaySyntaxError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def ram(self):
        items = [self.prod()]
        while self.peek()[0] == ",":
            self.take(",")
            items.append(self.prod())
        return items[0] if len(items) == 1 else Ramification(tuple(items))

    def prod(self):
        items = [self.atom()]
        while self.peek()[0] in ("int", "inf", "("):
            items.append(self.atom())
        return product(items)

    def atom(self):
        kind, val, pos = self.peek()
        if kind == "int":
            self.i += 1
            return Integer(val)
        if kind == "inf":
            self.i += 1
            return Infinity()
        if kind == "(":
            self.take("(")
            inner = self.ram()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(kind)
        raise ConwaySyntaxError(f"expected a tangle, found {what}", pos)


def parse_conway(text: str, strict: bool = False) -> TangleExpr:
    """Parse Conway notation.  ``strict`` rejects unsigned multi-digit runs."""
    p = _Parser(_tokenize(text, strict))
    tree = p.ram()
    p.take("end")
    return tree


def _atom_text(t: TangleExpr) -> str:
    if isinstance(t, Integer):
        if 0 <= t.n <= 9:
            return str(t.n)
        return f"{t.n:+d}"
    if isinstance(t, Infinity):
        return "oo"
    return "(" + print_conway(t) + ")"


def print_conway(t: TangleExpr) -> str:
    if isinstance(t, Closure):
        return print_conway(t.child)
    if isinstance(t, Ramification):
        return "(" + ",".join(print_conway(c) for c in t.children) + ")"
    if isinstance(t, Product):
        parts = []
        for k, c in enumerate(t.children):
            if isinstance(c, Ramification):
                parts.append(print_conway(c))
            elif k == 0 and isinstance(c, Product):
                raise ValueError("product with a product as first factor is not normalized")
            else:
                parts.append(_atom_text(c))
        out = parts[0]
        for prev, cur in zip(parts, parts[1:]):
            glue = (prev.isdigit() and cur.isdigit()) or prev.endswith(")") or cur.startswith("(")
            out += ("" if glue else " ") + cur
        return out
    return _atom_text(t)


# ---------------------------------------------------------------------------
# fractions and continued fractions


@dataclass(frozen=True)
class Frac:
    """A rational number or infinity (``1/0``), kept reduced with ``q >= 0``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 and q == 0:
            raise ZeroDivisionError("0/0 is not a fraction")
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_infinite(self):
        return self.q == 0

    def inverse(self) -> "Frac":
        return Frac(self.q, self.p)

    def plus_int(self, n: int) -> "Frac":
        if self.is_infinite:
            return self
        return Frac(self.p + n * self.q, self.q)

    def __str__(self):
        return "oo" if self.is_infinite else (f"{self.p}" if self.q == 1 else f"{self.p}/{self.q}")

    @classmethod
    def parse(cls, text: str) -> "Frac":
        text = text.strip()
        if text in ("oo", "1/0"):
            return cls(1, 0)
        m = re.fullmatch(r"([+-]?\d+)(?:/([+-]?\d+))?", text)
        if not m:
            raise ValueError(f"not a fraction: {text!r}")
        return cls(int(m.group(1)), int(m.group(2) or 1))


def cf_eval(c: Sequence[int]) -> Frac:
    """``[[c_1..c_r]] = c_r + 1/[[c_1..c_{r-1}]]``, infinity propagated."""
    if not c:
        raise ValueError("empty continued fraction")
    x = Frac(c[0], 1)
    for s in c[1:]:
        x = x.inverse().plus_int(s)
    return x


def cf_expand(f: Frac) -> List[int]:
    """Inverse of :func:`cf_eval` by Euclid's algorithm run from the end.

    Entries share the sign of ``f``; only the first entry can be zero
    (when ``|f| < 1``).  Infinity expands to ``[0, 0]``.
    """
    if f.is_infinite:
        return [0, 0]
    out = []
    p, q = f.p, f.q
    sign = -1 if p < 0 else 1
    p = abs(p)
    while True:
        c, r = divmod(p, q)
        out.append(sign * c)
        if r == 0:
            break
        p, q = q, r
    return out[::-1]


# ---------------------------------------------------------------------------
# Montesinos forms


@dataclass(frozen=True)
class MontesinosForm:
    fractions: Tuple[Frac, ...]
    e: int = 0

    def __post_init__(self):
        fr = tuple(self.fractions)
        for f in fr:
            if f.is_infinite or f.q < 2:
                raise ValueError(f"fractional part {f} needs denominator >= 2")
        object.__setattr__(self, "fractions", fr)

    def entry_sum(self):
        from fractions import Fraction
        return sum((Fraction(f.p, f.q) for f in self.fractions), Fraction(self.e))

    def __len__(self):
        return len(self.fractions)

    def __str__(self):
        return "M(" + ",".join(f"{f.p}/{f.q}" for f in self.fractions) + f";{self.e})"

    @classmethod
    def parse(cls, text: str) -> "MontesinosForm":
        m = re.fullmatch(r"\s*M\((.*?)(?:;\s*([+-]?\d+))?\)\s*", text)
        if not m:
            raise ValueError(f"not a Montesinos form: {text!r}")
        fr = tuple(Frac.parse(x) for x in m.group(1).split(",") if x.strip())
        return cls(fr, int(m.group(2) or 0))

    def mirror(self) -> "MontesinosForm":
        return MontesinosForm(tuple(Frac(-f.p, f.q) for f in self.fractions), -self.e)


def montesinos_canonical(m: MontesinosForm) -> MontesinosForm:
    """Move every ``q_i`` into ``0 < q_i < p_i``, shifting ``e`` to compensate."""
    e = m.e
    fr = []
    for f in m.fractions:
        k = f.p // f.q
        fr.append(Frac(f.p - k * f.q, f.q))
        e += k
    return MontesinosForm(tuple(fr), e)


def _dihedral(seq):
    n = len(seq)
    for r in (seq, seq[::-1]):
        for k in range(n):
            yield tuple(r[k:] + r[:k])


def montesinos_equal(m1: MontesinosForm, m2: MontesinosForm, mirror: bool = False) -> bool:
    """Isotopy test for Montesinos links of length at least 3.

    Canonical forms must agree up to cyclic permutation and reversal of the
    fractional parts.  ``mirror=True`` also accepts ``m2`` equal to the mirror.
    """
    if len(m1) < 3 or len(m2) < 3:
        raise ValueError("length < 3: compare as rational links (2-bridge classification) instead")
    a = montesinos_canonical(m1)
    candidates = [montesinos_canonical(m2)]
    if mirror:
        candidates.append(montesinos_canonical(m2.mirror()))
    for b in candidates:
        if a.e != b.e or len(a) != len(b):
            continue
        if tuple(a.fractions) in set(_dihedral(list(b.fractions))):
            return True
    return False


def rational_tangle(f: Frac) -> TangleExpr:
    return product([Integer(c) for c in cf_expand(f)])


def montesinos_to_conway(m: MontesinosForm) -> TangleExpr:
    """Conway notation ``(c..), (c..), ..., e 0`` of a Montesinos link."""
    parts = [rational_tangle(Frac(f.q, f.p)) for f in m.fractions]
    if len(parts) == 1 and m.e == 0:
        return product(list(_factors(parts[0])) + [Integer(0)])
    if m.e != 0 or len(parts) < 2:
        parts.append(Product((Integer(m.e), Integer(0))))
    return Ramification(tuple(parts))


def _factors(t: TangleExpr):
    return t.children if isinstance(t, Product) else (t,)


# ---------------------------------------------------------------------------
# rendering
#
# An unoriented crossing is (a, b, c, d): arc labels counterclockwise with
# a-c the under strand.  A tangle keeps its crossings and the labels of the
# arcs at its four ends; gluing merges labels.


class _Uf:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        while x in self.parent:
            x = self.parent[x]
        return x

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x != y:
            self.parent[max(x, y)] = min(x, y)


class _Builder:
    def __init__(self):
        self.n = 0
        self.uf = _Uf()

    def fresh(self):
        self.n += 1
        return self.n


@dataclass
class _T:
    xs: List[Tuple[int, int, int, int]]
    ends: Dict[str, int]


def _zero(b):
    top, bot = b.fresh(), b.fresh()
    return _T([], {"NW": top, "NE": top, "SW": bot, "SE": bot})


def _infinity(b):
    left, right = b.fresh(), b.fresh()
    return _T([], {"NW": left, "SW": left, "NE": right, "SE": right})


def _unit(b, s):
    ne, nw, sw, se = (b.fresh() for _ in range(4))
    if s > 0:
        x = (se, ne, nw, sw)   # SW-NE over
    else:
        x = (sw, se, ne, nw)   # SE-NW over
    return _T([x], {"NE": ne, "NW": nw, "SW": sw, "SE": se})


def _add(b, x, y):
    b.uf.union(x.ends["NE"], y.ends["NW"])
    b.uf.union(x.ends["SE"], y.ends["SW"])
    return _T(x.xs + y.xs, {"NW": x.ends["NW"], "SW": x.ends["SW"], "NE": y.ends["NE"], "SE": y.ends["SE"]})


def _reflect(x):
    xs = [(a, d, c, b) for (a, b, c, d) in x.xs]
    e = x.ends
    return _T(xs, {"NW": e["NW"], "SE": e["SE"], "NE": e["SW"], "SW": e["NE"]})


def _render(b, t) -> _T:
    if isinstance(t, Integer):
        if t.n == 0:
            return _zero(b)
        s = 1 if t.n > 0 else -1
        acc = _unit(b, s)
        for _ in range(abs(t.n) - 1):
            acc = _add(b, acc, _unit(b, s))
        return acc
    if isinstance(t, Infinity):
        return _infinity(b)
    if isinstance(t, Product):
        acc = _render(b, t.children[0])
        for c in t.children[1:]:
            acc = _add(b, _reflect(acc), _render(b, c))
        return acc
    if isinstance(t, Ramification):
        acc = None
        for c in t.children:
            piece = _reflect(_render(b, c))
            acc = piece if acc is None else _add(b, acc, piece)
        return acc
    if isinstance(t, Closure):
        raise ValueError("closure may only appear at the root")
    raise TypeError(f"not a tangle expression: {t!r}")


def _orient(xs, loops, renumber: bool = True) -> Diagram:
    """Orient an unoriented crossing list by walking each component.
    Crossing order and labels survive when ``renumber`` is off."""
    occ: Dict[int, List[Tuple[int, int]]] = {}
    for i, x in enumerate(xs):
        for k in range(4):
            occ.setdefault(x[k], []).append((i, k))
    for arc, where in occ.items():
        if len(where) != 2:
            raise ValueError(f"arc {arc} meets {len(where)} crossing ends")
    head: Dict[Tuple[int, int], bool] = {}   # (crossing, slot) -> arc enters here
    for start in sorted(occ):
        i, k = occ[start][0]
        if (i, k) in head:
            continue
        # enter crossing i at slot k, walking along arcs
        while (i, k) not in head:
            head[(i, k)] = True
            out = (k + 2) % 4
            head[(i, out)] = False
            arc = xs[i][out]
            a, b = occ[arc]
            i, k = b if a == (i, out) else a
    crossings = []
    for i, (a, b, c, d) in enumerate(xs):
        if not head[(i, 0)]:
            a, b, c, d = c, d, a, b
            over_in_is_d = head[(i, 1)]
        else:
            over_in_is_d = head[(i, 3)]
        crossings.append(Crossing(a, b, c, d, 1 if over_in_is_d else -1))
    D = Diagram(tuple(crossings), loops)
    return D.renumbered() if renumber else D


def tangle_to_diagram(t: TangleExpr) -> Diagram:
    """Numerator closure of the tangle as an oriented diagram.

    Components are oriented by traversal from their smallest arc; reorient
    with :meth:`Diagram.reverse_components`.  A tree without an explicit
    :class:`Closure` root is closed implicitly, with a warning.
    """
    if isinstance(t, Closure):
        t = t.child
    else:
        warnings.warn("tangle expression closed implicitly", stacklevel=2)
    b = _Builder()
    tt = _render(b, t)
    b.uf.union(tt.ends["NW"], tt.ends["NE"])
    b.uf.union(tt.ends["SW"], tt.ends["SE"])
    f = b.uf.find
    xs = [tuple(f(a) for a in x) for x in tt.xs]
    used = {a for x in xs for a in x}
    every = {f(k) for k in range(1, b.n + 1)}
    loops = len(every - used)
    return _orient(xs, loops)


def closure(t: TangleExpr) -> Diagram:
    return tangle_to_diagram(Closure(t))


def pretzel_diagram(params: Sequence[int]) -> Diagram:
    """Standard pretzel diagram: columns of ``p_i`` vertical half twists."""
    params = list(params)
    if not params:
        raise ValueError("pretzel needs at least one column")
    if len(params) == 1:
        return closure(Product((Integer(params[0]), Integer(0))))
    return closure(Ramification(tuple(Integer(p) for p in params)))


def rational_link(f: Frac) -> Diagram:
    """The 2-bridge link S(p, q), the closure of T(p/q)."""
    return closure(rational_tangle(f))
