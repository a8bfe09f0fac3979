"""Exact integer polynomials for the Conway and Alexander polynomials.

Two sparse types share one implementation:

* :class:`ConwayPoly` -- polynomials in ``z`` with nonnegative exponents.
* :class:`IntLaurent` -- Laurent polynomials in ``u = t^(1/2)``.  Even
  ``u``-exponents are integer powers of ``t``; odd ones only occur for links
  with an even number of components.

Both are immutable, hashable and never store zero coefficients.
"""
from __future__ import annotations

import math
import re
from typing import Dict, Iterable, Mapping, Tuple


class DegreeError(ValueError):
    """Raised when a degree is requested for the zero polynomial."""


class NotConwayImageError(ValueError):
    """Raised when a Laurent polynomial has no preimage under z = u - 1/u."""


class PolyParseError(ValueError):
    pass


class _Sparse:
    __slots__ = ("_items", "_hash")
    _var = "x"

    def __init__(self, coeffs: Mapping[int, int] | Iterable[Tuple[int, int]] = ()):
        acc: Dict[int, int] = {}
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        for e, c in items:
            if c:
                acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._items = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._check()
        self._hash = None

    def _check(self):
        pass

    # construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, items):
        obj = object.__new__(cls)
        obj._items = items
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1):
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: int):
        return cls({0: c})

    # container protocol ---------------------------------------------------
    @property
    def coeffs(self) -> Dict[int, int]:
        return dict(self._items)

    def items(self):
        return self._items

    def __getitem__(self, exponent: int) -> int:
        for e, c in self._items:
            if e == exponent:
                return c
        return 0

    def __bool__(self):
        return bool(self._items)

    def is_zero(self) -> bool:
        return not self._items

    def __eq__(self, other):
        if isinstance(other, int):
            return self._items == (((0, other),) if other else ())
        if type(other) is not type(self):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self._items))
        return self._hash

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, int):
            return type(self).constant(other)
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._items)
        for e, c in other._items:
            acc[e] = acc.get(e, 0) + c
        return type(self)(acc)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(tuple((e, -c) for e, c in self._items))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return type(self)({e: c * other for e, c in self._items})
        other = self._coerce(other)
        acc: Dict[int, int] = {}
        for e1, c1 in self._items:
            for e2, c2 in other._items:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return type(self)(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = type(self).constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int):
        """Multiply by the variable to the power ``k``."""
        return type(self)({e + k: c for e, c in self._items})

    # degree data ----------------------------------------------------------
    def degrees(self) -> Tuple[int, int, int, int]:
        return degrees(self)

    @property
    def mindeg(self) -> int:
        return degrees(self)[0]

    @property
    def maxdeg(self) -> int:
        return degrees(self)[1]

    @property
    def leading(self) -> int:
        return degrees(self)[3]

    def __call__(self, x):
        return sum(c * x**e for e, c in self._items)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


def degrees(X: _Sparse) -> Tuple[int, int, int, int]:
    """Return ``(mindeg, maxdeg, span, leading coefficient)`` of ``X``."""
    if X.is_zero():
        raise DegreeError("degree of the zero polynomial is undefined")
    lo, hi = X._items[0][0], X._items[-1][0]
    return lo, hi, hi - lo, X._items[-1][1]


def is_monic(X: _Sparse) -> bool:
    return abs(degrees(X)[3]) == 1


# --------------------------------------------------------------------------
# text form


def _format(items, var_of) -> str:
    if not items:
        return "0"
    out = []
    for e, c in items:
        sign = "-" if c < 0 else "+"
        a = abs(c)
        v = var_of(e)
        if not v:
            body = str(a)
        elif a == 1:
            body = v
        else:
            body = f"{a}{v}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


_TERM = re.compile(
    r"""([+-])?                      # sign
        (\d+)?\*?                    # coefficient
        (?:([a-z])                   # variable
           (?:\^(?:\(([+-]?\d+)(?:/(\d+))?\)|([+-]?\d+)))?
        )?""",
    re.X,
)


def _parse_terms(text: str, allowed: str):
    s = re.sub(r"\s+", "", text)
    if not s:
        raise PolyParseError("empty polynomial text")
    pos = 0
    terms = []
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise PolyParseError(f"cannot parse polynomial at position {pos}: {s[pos:]!r}")
        if pos > 0 and m.group(1) is None:
            raise PolyParseError(f"missing operator at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = int(m.group(2)) if m.group(2) else 1
        var = m.group(3)
        if var is None:
            num, den = 0, 1
        else:
            if var not in allowed:
                raise PolyParseError(f"unexpected variable {var!r}")
            if m.group(4) is not None:
                num, den = int(m.group(4)), int(m.group(5) or 1)
            elif m.group(6) is not None:
                num, den = int(m.group(6)), 1
            else:
                num, den = 1, 1
        terms.append((sign * coeff, var, num, den))
        pos = m.end()
    return terms


# --------------------------------------------------------------------------
# concrete types


class ConwayPoly(_Sparse):
    """Polynomial in ``z`` with integer coefficients and exponents >= 0."""

    __slots__ = ()

    def _check(self):
        if self._items and self._items[0][0] < 0:
            raise ValueError("ConwayPoly exponents must be nonnegative")

    def __str__(self):
        return _format(self._items, lambda e: "" if e == 0 else ("z" if e == 1 else f"z^{e}"))

    @classmethod
    def parse(cls, text: str) -> "ConwayPoly":
        acc: Dict[int, int] = {}
        for c, var, num, den in _parse_terms(text, "z"):
            if den != 1 or num < 0:
                raise PolyParseError("z exponents must be nonnegative integers")
            acc[num] = acc.get(num, 0) + c
        return cls(acc)

    def mirror(self, components: int) -> "ConwayPoly":
        """Polynomial of the mirror image of an ``components``-component link."""
        return self if components % 2 else -self

    def div_z(self) -> "ConwayPoly":
        """Exact division by ``z``; the constant term must vanish."""
        if self[0]:
            raise ValueError("polynomial is not divisible by z")
        return self.shift(-1)


class IntLaurent(_Sparse):
    """Laurent polynomial in ``u = t^(1/2)`` with integer coefficients."""

    __slots__ = ()

    def _uses_u(self) -> bool:
        return any(e % 2 for e, _ in self._items)

    def __str__(self):
        if self._uses_u():
            def var(e):
                return "" if e == 0 else ("u" if e == 1 else f"u^{e}")
        else:
            def var(e):
                k = e // 2
                return "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        return _format(tuple(reversed(self._items)), var)

    @classmethod
    def parse(cls, text: str) -> "IntLaurent":
        acc: Dict[int, int] = {}
        for c, var, num, den in _parse_terms(text, "tu"):
            if var is None:
                e = 0
            elif var == "u":
                if den != 1:
                    raise PolyParseError("u exponents must be integers")
                e = num
            else:
                if den not in (1, 2):
                    raise PolyParseError("t exponents must be integers or halves")
                e = num * (2 // den)
            acc[e] = acc.get(e, 0) + c
        return cls(acc)

    @classmethod
    def t(cls, k: int = 1, coeff: int = 1) -> "IntLaurent":
        return cls({2 * k: coeff})

    def at_one(self) -> int:
        return sum(c for _, c in self._items)

    def determinant(self) -> int:
        """``|Delta(-1)|``, evaluated at ``u = i``."""
        re_part = im_part = 0
        for e, c in self._items:
            r = e % 4
            if r == 0:
                re_part += c
            elif r == 1:
                im_part += c
            elif r == 2:
                re_part -= c
            else:
                im_part -= c
        return math.isqrt(re_part * re_part + im_part * im_part)

    def invert(self) -> "IntLaurent":
        """Substitute ``u -> 1/u``."""
        return IntLaurent({-e: c for e, c in self._items})

    def normalize_units(self) -> "IntLaurent":
        """Representative of ``self`` modulo units ``+-u^k``.

        Centres the exponent range around 0 (shifting by the parity-preserving
        amount) and makes the leading coefficient positive.
        """
        if self.is_zero():
            return self
        lo, hi, _, lead = degrees(self)
        shifted = self.shift(-((lo + hi) // 2))
        return -shifted if lead < 0 else shifted


def is_admissible(nabla: ConwayPoly, n: int) -> bool:
    """Whether ``nabla`` can be the Conway polynomial of an ``n``-component link."""
    if n < 1:
        raise ValueError("component count must be >= 1")
    if n == 1:
        return nabla[0] == 1 and all(e % 2 == 0 for e, _ in nabla.items())
    return all(e % 2 == (n - 1) % 2 and e >= n - 1 for e, _ in nabla.items())


_Z_IN_U = IntLaurent({1: 1, -1: -1})


def conway_to_alexander(nabla: ConwayPoly) -> IntLaurent:
    """Substitute ``z = u - 1/u``."""
    result = IntLaurent()
    power = IntLaurent.constant(1)
    last = 0
    for e, c in nabla.items():
        power = power * _Z_IN_U ** (e - last)
        last = e
        result = result + power * c
    return result


def alexander_to_conway(delta: IntLaurent) -> ConwayPoly:
    """Inverse of :func:`conway_to_alexander`.

    Peels off ``leading * (u - 1/u)^k`` from the top; any remainder means the
    input is not in the image of the substitution.
    """
    rest = delta
    out: Dict[int, int] = {}
    while rest:
        lo, hi, _, lead = degrees(rest)
        if lo != -hi or hi < 0:
            raise NotConwayImageError(f"{delta} is not of the form nabla(u - 1/u)")
        out[hi] = lead
        rest = rest - _Z_IN_U**hi * lead
    return ConwayPoly(out)


def coeff_vector(nabla: ConwayPoly) -> Tuple[int, ...]:
    """The sequence ``a_1..a_d`` with ``nabla = 1 - a_1 z^2 + a_2 z^4 - ...``."""
    if not is_admissible(nabla, 1):
        raise ValueError(f"{nabla} is not an admissible knot polynomial")
    d = nabla.maxdeg // 2
    return tuple((-1) ** i * nabla[2 * i] for i in range(1, d + 1))


def from_coeff_vector(a: Iterable[int]) -> ConwayPoly:
    """Knot polynomial ``1 - a_1 z^2 + a_2 z^4 - ...`` for the given ``a``."""
    acc = {0: 1}
    for i, ai in enumerate(a, start=1):
        acc[2 * i] = (-1) ** i * ai
    return ConwayPoly(acc)


def _int_det(m):
    """Bareiss fraction-free determinant of an integer matrix."""
    m = [row[:] for row in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def poly_det(matrix) -> list:
    """Determinant of a square matrix of integer polynomials in one variable.

    Entries are ascending coefficient lists.  Evaluates at enough integer
    points and interpolates, so everything stays exact.  Returns the
    ascending coefficient list of the result.
    """
    n = len(matrix)
    if n == 0:
        return [1]
    deg = sum(max((len(e) - 1 for e in row), default=0) for row in matrix)
    pts = list(range(deg + 1))
    vals = []
    for x in pts:
        vals.append(_int_det([[sum(c * x ** k for k, c in enumerate(e)) for e in row] for row in matrix]))
    # Newton divided differences over the rationals
    from fractions import Fraction
    coef = [Fraction(v) for v in vals]
    for j in range(1, len(pts)):
        for i in range(len(pts) - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (pts[i] - pts[i - j])
    result = [Fraction(0)] * len(pts)
    for i in range(len(pts) - 1, -1, -1):
        # result = result * (x - pts[i]) + coef[i]
        new = [Fraction(0)] * len(pts)
        for k, c in enumerate(result):
            if c:
                if k + 1 < len(new):
                    new[k + 1] += c
                new[k] -= pts[i] * c
        new[0] += coef[i]
        result = new
    out = [int(c) for c in result]
    assert all(c.denominator == 1 for c in result)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


Z = ConwayPoly({1: 1})
ONE = ConwayPoly({0: 1})
