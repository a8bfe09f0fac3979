import random

import pytest

from helpers import FIGURE_EIGHT, TREFOIL, braid_closure, random_braid_diagram
from knotforge.construct import realize_knot, realize_link_n
from knotforge.diagram import conway_skein, mirror, validate
from knotforge.poly import ConwayPoly
from knotforge.surgery import (
    ClaspSite,
    SurgeryError,
    apply_tangle_surgery,
    clasp_site,
    clasping,
    concordance_pair_surgery,
    enumerate_family,
    large_volume_triples,
    mirror_double,
    parallel_clasps,
    parallel_strand_pairs,
    stallings_full_twist,
    surgery_triples,
    v2_pretzel,
)
from knotforge.tangle import pretzel_diagram

P = ConwayPoly.parse


def test_triples_example():
    t = surgery_triples(1, 2)
    assert (t.p, t.q, t.r) == (8, 5, -3)


def test_triples_identities():
    for k in range(-5, 6):
        if k == 0:
            continue
        for n in range(-5, 6):
            t = surgery_triples(k, n)
            assert (t.p - 1) * t.q + (t.p - 1) * t.r + t.q * t.r == -1
            assert (t.p + 1) * t.q + (t.p + 1) * t.r + t.q * t.r == 4 * k - 1
            assert t.q + t.r == 2 * k and t.p % 2 == 0
    with pytest.raises(ValueError):
        surgery_triples(0, 1)


def test_v2_base_case():
    for k in range(1, 6):
        # the two pretzel knots sharing a clasp with k twists
        assert v2_pretzel(1, 1, 2 * k - 1) == k
        assert v2_pretzel(-1, 1, 2 * k - 1) == 0
    with pytest.raises(ValueError):
        v2_pretzel(2, 1, 1)


def test_v2_agrees_with_skein():
    for a, b, c in [(1, 1, 1), (-3, 5, 7), (3, 3, -1), (5, -3, 1), (-1, -1, -1)]:
        nabla = conway_skein(pretzel_diagram([a, b, c]))
        assert nabla[2] == v2_pretzel(a, b, c)


def test_large_volume_triples():
    trip = large_volume_triples(99)
    assert (7, 5, -3) in trip
    assert all(p * q + p * r + q * r == -1 for p, q, r in trip)
    assert all(q + r == 2 for _, q, r in trip)
    with pytest.raises(ValueError):
        large_volume_triples(3)


def test_clasp_site_rejects_non_clasp():
    with pytest.raises(SurgeryError):
        clasp_site(TREFOIL, 0, 0)


@pytest.mark.parametrize("n", [-2, -1, 0, 1, 2])
@pytest.mark.parametrize("knot", [TREFOIL, mirror(TREFOIL)], ids=["right", "left"])
def test_surgery_on_trefoil_clasp(n, knot):
    site = parallel_clasps(knot)[0]
    out = apply_tangle_surgery(knot, site, surgery_triples(1, n))
    validate(out)
    assert out.n_components == 1
    assert conway_skein(out) == conway_skein(knot)


@pytest.mark.parametrize("text", ["1-z^2", "1+z^2-2z^4", "1-2z^2+2z^4"])
def test_surgery_at_clasp_star(text):
    r = realize_knot(P(text))
    site = clasp_site(r.diagram, *r.sites["clasp_star"])
    for n in (-2, -1, 1, 2):
        out = apply_tangle_surgery(r.diagram, site, surgery_triples(1, n))
        assert conway_skein(out) == r.nabla
        assert len(out.crossings) > len(r.diagram.crossings)


def test_surgery_rejects_non_knot_site():
    with pytest.raises(SurgeryError):
        clasp_site(TREFOIL, 0, 7)


@pytest.mark.parametrize("base", [TREFOIL, FIGURE_EIGHT, braid_closure([], 1)], ids=["3_1", "4_1", "unknot"])
def test_concordance_pair(base):
    out, info = concordance_pair_surgery(base, surgery_triples(1, 1))
    assert conway_skein(out) == conway_skein(base)
    assert 0 <= info["chi_drop"] <= 4
    assert info["genus_growth"] == info["chi_drop"] // 2


def test_clasping_adds_a_component():
    rng = random.Random(11)
    for _ in range(50):
        d = random_braid_diagram(rng, 8)
        i = rng.randrange(len(d.crossings))
        out, meta = clasping(d, i, rng.choice([1, -1]))
        validate(out)
        assert abs(out.n_components - d.n_components) == 1
        assert meta["components_before"] == d.n_components
    with pytest.raises(ValueError):
        clasping(TREFOIL, 0, 0)


def test_stallings_identity_on_trefoil():
    seen = set()
    for pair in parallel_strand_pairs(TREFOIL):
        out, res = stallings_full_twist(TREFOIL, pair, 1)
        assert conway_skein(out) == P("1+z^2") + res
        seen.add(str(res))
    assert seen - {"0"}


def test_twist_identity_both_senses():
    base = conway_skein(FIGURE_EIGHT)
    for pair in parallel_strand_pairs(FIGURE_EIGHT):
        for sense in (1, -1):
            out, res = stallings_full_twist(FIGURE_EIGHT, pair, sense)
            assert conway_skein(out) == base + res
    with pytest.raises(ValueError):
        stallings_full_twist(FIGURE_EIGHT, pair, 0)


def test_mirror_double_site_has_zero_residual():
    r = realize_knot(P("1+z^2-z^4"))
    D, pair = mirror_double(r)
    target = conway_skein(D)
    assert target == r.nabla * r.nabla
    for sense in (1, -1):
        out, res = stallings_full_twist(D, pair, sense)
        assert res.is_zero() and conway_skein(out) == target
        assert len(out.crossings) == len(D.crossings) + 2


def test_family_knot():
    r = realize_knot(P("1-2z^2+2z^4"))
    fam = enumerate_family(r, 3)
    assert len(fam.members) == 3
    for D in fam.members:
        assert conway_skein(D) == r.nabla
    lines = list(fam.json_lines())
    assert len(lines) == 3 and all('"verified": true' in s for s in lines)


def test_family_stallings_four_components():
    base = realize_link_n(P("z^3-z^5"), 4)
    fam = enumerate_family(base, 3, mode="stallings")
    lks = [note["twisted_linking_number"] for note in fam.notes]
    assert all(b > a for a, b in zip(lks, lks[1:]))
    for D in fam.members:
        assert conway_skein(D) == base.nabla


def test_family_count_zero():
    fam = enumerate_family(realize_knot(P("1+z^2")), 0)
    assert fam.members == [] and fam.site is None
    with pytest.raises(ValueError):
        enumerate_family(realize_knot(P("1+z^2")), -1)


def test_site_json():
    assert ClaspSite(0, 1, -1).to_json() == {"bottom": 0, "top": 1, "sign": -1, "k": 1}
