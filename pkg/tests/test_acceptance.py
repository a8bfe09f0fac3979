"""Acceptance suite: one test per criterion, each timed against its budget.

Every test prints a PASS/FAIL line and appends it to the terminal summary.
"""
import itertools
import json
import math
import random
import subprocess
import sys
import time


import acceptance_log
from helpers import TORUS_2_4, TREFOIL, r1_kink, random_braid_diagram
from knotforge.cli import EXIT_IMPOSSIBLE, EXIT_INPUT, EXIT_LIMIT, EXIT_OK
from knotforge.construct import (
    ImpossibleRealization,
    alexander_from_seifert,
    match_linking_template,
    realize_knot,
    realize_link2,
    realize_link_n,
    seifert_matrix_V,
)
from knotforge.diagram import (
    V0,
    alexander_det,
    conway_skein,
    equal_up_to_units,
    insert_r2,
    is_split_diagram,
    linking_graph,
    mirror,
    smooth,
    switch,
    twist_classes,
    validate,
)
from knotforge.poly import ConwayPoly, Z, conway_to_alexander, from_coeff_vector
from knotforge.surgery import (
    apply_tangle_surgery,
    clasp_site,
    concordance_pair_surgery,
    large_volume_triples,
    parallel_clasps,
    surgery_triples,
    v2_pretzel,
)
from knotforge.tangle import Frac, MontesinosForm, cf_eval, cf_expand, montesinos_canonical, montesinos_equal, pretzel_diagram

P = ConwayPoly.parse


def record(num, title, budget, started, failures):
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed <= budget
    line = f"[{'PASS' if ok else 'FAIL'}] {num:>2}. {title}  ({elapsed:.2f}s / {budget}s)"
    if failures:
        line += f"  {len(failures)} failing case(s), first: {failures[0]}"
    elif elapsed > budget:
        line += "  over time budget"
    acceptance_log.LINES.append(line)
    print(line)
    assert not failures, failures[:5]
    assert elapsed <= budget


def knot_sweep():
    for d in (1, 2, 3):
        for a in itertools.product(range(-3, 4), repeat=d):
            if a[-1]:
                yield a


def test_c01_knot_realization():
    t0 = time.perf_counter()
    bad = []
    for a in knot_sweep():
        d = len(a)
        nabla = from_coeff_vector(a)
        r = realize_knot(nabla)
        rev, strong = twist_classes(r.diagram)
        got = (conway_skein(r.diagram) == nabla, validate(r.diagram).genus, strong, rev)
        if got != (True, d, 4 * d - 2, 4 * d - 1):
            bad.append((a, got))
    record(1, "knot realization: skein, genus d, t_strong 4d-2, t_strong_reverse 4d-1", 60, t0, bad)


def test_c02_matrix_coherence():
    t0 = time.perf_counter()
    bad = []
    pairs = [((2, 2), P("1-2z^2+2z^4"))] + [(a, from_coeff_vector(a)) for a in knot_sweep()]
    for a, nabla in pairs:
        if alexander_from_seifert(seifert_matrix_V(a)) != conway_to_alexander(nabla):
            bad.append(a)
    record(2, "Seifert matrix determinant equals Alexander polynomial", 5, t0, bad)


def _random_link2(rng, d):
    cs = [rng.randint(-3, 3) for _ in range(d - 1)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
    return ConwayPoly({2 * i + 1: c for i, c in enumerate(cs)})


def test_c03_two_components():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    bad = []
    for k in range(50):
        d = 1 + k % 5
        nabla = _random_link2(rng, d)
        r = realize_link2(nabla)
        if conway_skein(r.diagram) != nabla or r.diagram.n_components != 2:
            bad.append(str(nabla))
            continue
        # no bound is attached for d = 1 (20 V0 (d-1) = 0 carries no information)
        want = 20 * V0 * (d - 1)
        if d > 1 and not math.isclose(r.bound, want, abs_tol=1e-9):
            bad.append((str(nabla), r.bound, want))
        if d == 1 and r.bound is not None:
            bad.append((str(nabla), r.bound))
    record(3, "2-component realization and 20 V0 (d-1) bound", 120, t0, bad)


def _random_monic(rng, n):
    g = rng.randint(1, 2)
    cs = [rng.randint(-3, 3) for _ in range(g)] + [rng.choice([1, -1])]
    return ConwayPoly({n - 1 + 2 * i: c for i, c in enumerate(cs) if c})


def test_c04_n_components():
    t0 = time.perf_counter()
    rng = random.Random(7)
    bad = []
    for n in (3, 4, 5):
        cases = [_random_monic(rng, n) for _ in range(20)]
        cases += [ConwayPoly({n - 1: s}) for s in (1, -1) if not (n == 3 and s == 1)]
        for nabla in cases:
            r = realize_link_n(nabla, n)
            D = r.diagram
            if conway_skein(D) != nabla or D.n_components != n:
                bad.append((n, str(nabla), "skein"))
            elif r.genus > 0 and match_linking_template(linking_graph(D), n) is None:
                bad.append((n, str(nabla), "linking graph"))
    try:
        realize_link_n(P("z^2"), 3)
        bad.append("n=3, +z^2 was realized")
    except ImpossibleRealization:
        pass
    record(4, "n-component realization, linking templates, +z^2 exception", 300, t0, bad)


def test_c05_continued_fractions():
    t0 = time.perf_counter()
    bad = []
    if cf_eval([2, 1, 3]) != Frac(11, 3):
        bad.append("[2,1,3]")
    for p in range(-200, 201):
        for q in range(1, abs(p)):
            if math.gcd(p, q) == 1 and cf_eval(cf_expand(Frac(p, q))) != Frac(p, q):
                bad.append((p, q))
    record(5, "continued fraction round trip", 5, t0, bad)


def _random_form(rng):
    fr = []
    for _ in range(rng.randint(3, 6)):
        den = rng.randint(2, 30)
        num = rng.choice([x for x in range(-60, 61) if x % den])
        fr.append(Frac(num, den))
    return MontesinosForm(tuple(fr), rng.randint(-5, 5))


def test_c06_montesinos():
    t0 = time.perf_counter()
    rng = random.Random(99)
    bad = []
    for _ in range(500):
        m = _random_form(rng)
        c = montesinos_canonical(m)
        if montesinos_canonical(c) != c or c.entry_sum() != m.entry_sum():
            bad.append(str(m))
            continue
        fr = list(m.fractions)
        k = rng.randrange(len(fr))
        moved = fr[k:] + fr[:k]
        if rng.random() < 0.5:
            moved = moved[::-1]
        if not montesinos_equal(m, MontesinosForm(tuple(moved), m.e)):
            bad.append(str(m))
    record(6, "Montesinos canonical form and equality", 5, t0, bad)


def test_c07_surgery_identities():
    t0 = time.perf_counter()
    bad = []
    t = surgery_triples(1, 2)
    if (t.p, t.q, t.r) != (8, 5, -3):
        bad.append(t)
    for k in range(-5, 6):
        for n in range(-5, 6):
            if k == 0:
                continue
            t = surgery_triples(k, n)
            p, q, r = t.p, t.q, t.r
            if (p - 1) * q + (p - 1) * r + q * r + 1 != 0 or (p + 1) * q + (p + 1) * r + q * r + 1 != 4 * k:
                bad.append((k, n))
    for k in range(1, 6):
        if v2_pretzel(1, 1, 2 * k - 1) != k or v2_pretzel(-1, 1, 2 * k - 1) != 0:
            bad.append(("v2", k))
    record(7, "surgery triple identities and v2 base case", 2, t0, bad)


def test_c08_surgery_preservation():
    t0 = time.perf_counter()
    bad = []
    targets = [(TREFOIL, parallel_clasps(TREFOIL)[0])]
    for text in ("1-z^2", "1+z^2-2z^4", "1-2z^2+2z^4", "1+3z^2-z^4+z^6"):
        r = realize_knot(P(text))
        targets.append((r.diagram, clasp_site(r.diagram, *r.sites["clasp_star"])))
    for D, site in targets:
        want = conway_skein(D)
        for n in range(-2, 3):
            out = apply_tangle_surgery(D, site, surgery_triples(1, n), verify=False)
            if conway_skein(out) != want:
                bad.append((str(want), n))
    for D, _ in targets[:3]:
        out, info = concordance_pair_surgery(D, surgery_triples(1, 1))
        if conway_skein(out) != conway_skein(D) or not 0 <= info["chi_drop"] <= 4:
            bad.append(("concordance", info))
    record(8, "tangle surgery and concordance pair preserve nabla", 120, t0, bad)


def test_c09_large_volume():
    t0 = time.perf_counter()
    bad = []
    trip = large_volume_triples(99)
    if trip[[q for _, q, _ in trip].index(5)] != (7, 5, -3):
        bad.append("q=5")
    bad += [x for x in trip if x[0] * x[1] + x[0] * x[2] + x[1] * x[2] != -1]
    record(9, "large-volume triples", 1, t0, bad)


def test_c10_skein_engine():
    t0 = time.perf_counter()
    rng = random.Random(12345)
    bad = []
    for k in range(200):
        d = random_braid_diagram(rng, 12)
        nabla = conway_skein(d)
        i = rng.randrange(len(d.crossings))
        pos = d if d.crossings[i].sign > 0 else switch(d, i)
        if conway_skein(pos) - conway_skein(switch(pos, i)) != Z * conway_skein(smooth(pos, i)):
            bad.append((k, "skein relation"))
        if conway_skein(mirror(d)) != nabla * (-1) ** (d.n_components + 1):
            bad.append((k, "mirror parity"))
        if k % 4 == 0:
            arc = rng.choice([x.a for x in d.crossings])
            if conway_skein(r1_kink(d, arc, rng.random() < 0.5)) != nabla or conway_skein(insert_r2(d, i)) != nabla:
                bad.append((k, "reidemeister"))
        if is_split_diagram(d):
            if nabla:
                bad.append((k, "split but nonzero"))
        elif not equal_up_to_units(alexander_det(d), conway_to_alexander(nabla)):
            bad.append((k, "determinant"))
    if conway_skein(pretzel_diagram([-3, 5, 7])) != P("1"):
        bad.append("pretzel(-3,5,7)")
    if conway_skein(TORUS_2_4) != P("2z+z^3"):
        bad.append("torus link (2,4)")
    record(10, "skein engine soundness", 180, t0, bad)


def _cli(*args):
    p = subprocess.run([sys.executable, "-m", "knotforge.cli", *args], capture_output=True, text=True)
    return p.returncode, p.stdout


def test_c11_cli(tmp_path):
    t0 = time.perf_counter()
    bad = []
    for comps, text in ((1, "1 - 2z^2 + 2z^4"), (2, "2z - z^3"), (3, "z^2 - z^4"), (5, "-z^4")):
        code, out = _cli("realize", f"--nabla={text}", "--components", str(comps), "--json")
        f = tmp_path / f"r{comps}.json"
        f.write_text(out)
        code2, out2 = _cli("eval", "--pd", str(f), "--json")
        got = json.loads(out2)["nabla"] if code2 == 0 else None
        if code != EXIT_OK or got != json.loads(out)["result"]["nabla"] or got != text:
            bad.append((text, got))
    expected = [
        (("realize", "--nabla", "1+z^2"), EXIT_OK),
        (("realize", "--nabla", "1+z"), EXIT_INPUT),
        (("realize", "--nabla", "z^2", "--components", "3"), EXIT_IMPOSSIBLE),
        (("--limit", "2", "eval", "--conway", "(-3,5,7)"), EXIT_LIMIT),
    ]
    for argv, want in expected:
        code, _ = _cli(*argv)
        if code != want:
            bad.append((argv, code))
    record(11, "CLI round trip and exit codes", 30, t0, bad)
