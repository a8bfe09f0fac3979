import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from knotforge.diagram import alexander_det, conway_skein, equal_up_to_units, is_split_diagram, validate
from knotforge.poly import ConwayPoly, conway_to_alexander
from knotforge.tangle import (
    AmbiguousDigitRun,
    Closure,
    ConwaySyntaxError,
    Frac,
    Infinity,
    Integer,
    MontesinosForm,
    Product,
    Ramification,
    cf_eval,
    cf_expand,
    closure,
    montesinos_canonical,
    montesinos_equal,
    montesinos_to_conway,
    parse_conway,
    pretzel_diagram,
    print_conway,
    rational_link,
    rational_tangle,
    tangle_to_diagram,
)

P = ConwayPoly.parse
M = MontesinosForm.parse


def test_parse_digit_runs_and_ramification():
    t = parse_conway("(213,-4,22,40)")
    assert t == Ramification((
        Product((Integer(2), Integer(1), Integer(3))),
        Integer(-4),
        Product((Integer(2), Integer(2))),
        Product((Integer(4), Integer(0))),
    ))
    assert print_conway(t) == "(213,-4,22,40)"


def test_parse_product_of_ramifications():
    t = parse_conway("(2,2,-2)(2,-2,2,-2,2)")
    assert isinstance(t, Product) and len(t.children) == 2
    assert all(isinstance(c, Ramification) for c in t.children)
    assert [len(c.children) for c in t.children] == [3, 5]


def test_parse_single_integer():
    assert parse_conway("4") == Integer(4)
    assert parse_conway("-12") == Integer(-12)
    assert parse_conway("oo") == Infinity()


def test_syntax_errors_carry_position():
    with pytest.raises(ConwaySyntaxError) as err:
        parse_conway("(2,3")
    assert err.value.position == 4
    with pytest.raises(ConwaySyntaxError):
        parse_conway("2,,3")
    with pytest.raises(AmbiguousDigitRun):
        parse_conway("12", strict=True)
    assert parse_conway("+12", strict=True) == Integer(12)


def test_cf_examples():
    assert cf_eval([2, 1, 3]) == Frac(11, 3)
    assert cf_eval([4]) == Frac(4, 1)
    assert cf_eval([2, 2]) == Frac(5, 2)
    assert cf_expand(Frac(4, 1)) == [4]
    assert cf_eval(cf_expand(Frac(5, 2))) == Frac(5, 2)
    assert cf_eval([0]).p == 0
    assert cf_eval([0, 0]).is_infinite


def test_cf_round_trip_exhaustive():
    for p in range(-200, 201):
        for q in range(1, abs(p)):
            if math.gcd(p, q) != 1:
                continue
            f = Frac(p, q)
            c = cf_expand(f)
            assert cf_eval(c) == f
            assert all(x * p > 0 for x in c[1:])


def test_frac_normalization():
    assert Frac(4, -6) == Frac(-2, 3)
    assert str(Frac(3, 0)) == "oo"
    with pytest.raises(ZeroDivisionError):
        Frac(0, 0)


def test_montesinos_canonical_examples():
    m = M("M(-1/3;0)")
    c = montesinos_canonical(m)
    assert str(c) == "M(2/3;-1)"
    assert montesinos_canonical(c) == c
    assert m.entry_sum() == c.entry_sum() == Fraction(-1, 3)


def test_montesinos_equal_examples():
    assert montesinos_equal(M("M(1/2,1/3,1/7;0)"), M("M(1/3,1/7,1/2;0)"))
    assert montesinos_equal(M("M(1/2,1/3,1/7;0)"), M("M(1/7,1/3,1/2;0)"))
    assert not montesinos_equal(M("M(1/2,1/3,1/7;0)"), M("M(1/2,1/3,1/7;1)"))
    assert montesinos_equal(M("M(1/2,1/3,1/7;0)"), M("M(-1/2,-1/3,-1/7;0)"), mirror=True)
    with pytest.raises(ValueError):
        montesinos_equal(M("M(1/2,1/3;1)"), M("M(1/3,1/2;1)"))


def test_rational_tangle_and_montesinos_notation():
    t = rational_tangle(Frac(11, 3))
    assert cf_eval([c.n for c in t.children]) == Frac(11, 3)
    assert print_conway(montesinos_to_conway(M("M(1/2;0)"))) == "20"
    fig2 = montesinos_to_conway(M("M(3/11,-1/4,2/5;4)"))
    assert isinstance(fig2, Ramification) and len(fig2.children) == 4
    assert fig2.children[-1] == Product((Integer(4), Integer(0)))
    assert fig2.children[1] == Integer(-4)


def test_closure_examples():
    assert conway_skein(closure(Integer(1))) == P("1")
    assert conway_skein(closure(rational_tangle(Frac(5, 2)))) == P("1-z^2")
    d = tangle_to_diagram(Closure(parse_conway("(213,-4,22,40)")))
    validate(d)


def test_rational_determinants():
    for p in range(2, 14):
        for q in range(1, p):
            if math.gcd(p, q) != 1:
                continue
            d = rational_link(Frac(p, q))
            delta = conway_skein(d)
            # |Delta(-1)| = |nabla(2i)|
            val = sum(c * (2j) ** e for e, c in delta.items())
            assert abs(val) == pytest.approx(p)


def test_pretzel_examples():
    assert conway_skein(pretzel_diagram([-3, 5, 7])) == P("1")
    d = pretzel_diagram([2, -2, 4])
    assert d.n_components == 3 and validate(d).genus == 0
    assert conway_skein(pretzel_diagram([1, 1, 1])) == P("1+z^2")


def test_crossing_count_is_leaf_sum():
    t = parse_conway("(213,-4,22,40)")
    assert len(tangle_to_diagram(Closure(t)).crossings) == 2 + 1 + 3 + 4 + 2 + 2 + 4


# -- properties --------------------------------------------------------------

leaf = st.one_of(st.integers(-12, 12).map(Integer), st.just(Infinity()))


def _extend(children):
    prods = st.lists(children, min_size=2, max_size=4).map(
        lambda xs: Product(tuple(xs)) if not isinstance(xs[0], Product) else Product((xs[0].children[0],) + tuple(xs[1:])))
    rams = st.lists(children, min_size=2, max_size=4).map(lambda xs: Ramification(tuple(xs)))
    return st.one_of(prods, rams)


asts = st.recursive(leaf, _extend, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(asts)
def test_print_parse_round_trip(t):
    assert parse_conway(print_conway(t)) == t


fracs = st.builds(lambda p, q: Frac(p, q), st.integers(-40, 40).filter(bool), st.integers(2, 40)).filter(lambda f: f.q >= 2)
forms = st.builds(MontesinosForm, st.lists(fracs, min_size=3, max_size=6).map(tuple), st.integers(-5, 5))


@settings(max_examples=200, deadline=None)
@given(forms)
def test_canonical_preserves_sum_and_is_idempotent(m):
    c = montesinos_canonical(m)
    assert c.entry_sum() == m.entry_sum()
    assert montesinos_canonical(c) == c
    assert all(0 < f.p < f.q for f in c.fractions)


@settings(max_examples=100, deadline=None)
@given(forms, forms, st.integers(0, 11))
def test_montesinos_equal_is_equivalence(a, b, k):
    assert montesinos_equal(a, a)
    assert montesinos_equal(a, b) == montesinos_equal(b, a)
    fr = list(a.fractions)
    k %= len(fr)
    shifted = MontesinosForm(tuple(fr[k:] + fr[:k])[::-1], a.e)
    assert montesinos_equal(a, shifted)
    if montesinos_equal(a, b):
        assert montesinos_equal(shifted, b)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_arborescent_diagrams_validate(seed):
    rng = random.Random(seed)

    def rnd(depth):
        if depth == 0 or rng.random() < 0.35:
            return Integer(rng.choice([-3, -2, -1, 1, 2, 3]))
        kids = tuple(rnd(depth - 1) for _ in range(rng.randint(2, 3)))
        if rng.random() < 0.5:
            return Ramification(kids)
        if isinstance(kids[0], Product):
            kids = (kids[0].children[0],) + kids[1:]
        return Product(kids)

    d = tangle_to_diagram(Closure(rnd(3)))
    if not d.crossings:
        return
    validate(d)
    if not is_split_diagram(d):
        assert equal_up_to_units(alexander_det(d), conway_to_alexander(conway_skein(d)))
