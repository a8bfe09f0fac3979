"""Skein-relation evaluator for the Conway polynomial.

Works on raw tuples ``(a, b, c, d, sign)`` for speed.  Results are dense
ascending coefficient lists in ``z`` (``[]`` is zero).

Each step picks base points (the smallest arc label on each component),
walks the components in order and switches the first crossing reached from
below.  Since switching never renames arcs the base points stay put, so the
number of such crossings drops and the recursion terminates.  Arc labels are
merged to the minimum of each class when crossings disappear, which makes the
labelled crossing set a path-independent memo key.
"""
from __future__ import annotations

import sys


def _add(p, q, scale=1, shift=0):
    n = max(len(p), len(q) + shift)
    out = list(p) + [0] * (n - len(p))
    for k, c in enumerate(q):
        out[k + shift] += scale * c
    while out and out[-1] == 0:
        out.pop()
    return out


def _over_in(x):
    return x[3] if x[4] > 0 else x[1]


def _over_out(x):
    return x[1] if x[4] > 0 else x[3]


def _merge(xs, loops, drop, joins):
    parent = {}

    def find(a):
        while a in parent:
            a = parent[a]
        return a

    for p, q in joins:
        rp, rq = find(p), find(q)
        if rp != rq:
            if rq < rp:
                rp, rq = rq, rp
            parent[rq] = rp
    kept = []
    present = set()
    for i, x in enumerate(xs):
        if i in drop:
            continue
        a, b, c, d, s = x
        if parent:
            x = (find(a), find(b), find(c), find(d), s)
        kept.append(x)
        present.update(x[:4])
    roots = {find(p) for pq in joins for p in pq}
    loops += sum(1 for r in roots if r not in present)
    return kept, loops


def _simplify_once(xs, loops):
    """Apply one R1 or R2 removal; ``None`` if there is none."""
    for i, x in enumerate(xs):
        for k in range(4):
            if x[k] == x[(k + 1) % 4]:
                return _merge(xs, loops, {i}, [(x[(k + 2) % 4], x[(k + 3) % 4])])
    occ = {}
    for i, x in enumerate(xs):
        for k in range(4):
            occ.setdefault(x[k], []).append((i, k))
    for arc, ends in occ.items():
        (i, k), (j, m) = ends
        if i == j or (k - m) % 2:
            continue
        xi, xj = xs[i], xs[j]
        if xi[(k + 1) % 4] == xj[(m - 1) % 4] or xi[(k - 1) % 4] == xj[(m + 1) % 4]:
            if xi[(k + 1) % 4] == xj[(m - 1) % 4]:
                f, fi, fj = xi[(k + 1) % 4], (k + 3) % 4, (m + 1) % 4
            else:
                f, fi, fj = xi[(k - 1) % 4], (k + 1) % 4, (m - 1) % 4
            joins = [(xi[(k + 2) % 4], xj[(m + 2) % 4]), (xi[fi], xj[fj])]
            return _merge(xs, loops, {i, j}, joins)
    return None


def simplify(xs, loops):
    xs = list(xs)
    while True:
        r = _simplify_once(xs, loops)
        if r is None:
            return xs, loops
        xs, loops = r


def _pieces(xs):
    parent = list(range(len(xs)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    seen = {}
    for i, x in enumerate(xs):
        for arc in x[:4]:
            if arc in seen:
                ri, rj = find(i), find(seen[arc])
                if ri != rj:
                    parent[ri] = rj
            else:
                seen[arc] = i
    return len({find(i) for i in range(len(xs))})


def _first_bad(xs):
    """Index of the first crossing met from below, and the component count."""
    nxt = {}
    head = {}
    for i, x in enumerate(xs):
        nxt[x[0]] = x[2]
        head[x[0]] = (i, True)
        oi = _over_in(x)
        nxt[oi] = _over_out(x)
        head[oi] = (i, False)
    seen_arc = set()
    seen_x = set()
    ncomp = 0
    bad = None
    for start in sorted(nxt):
        if start in seen_arc:
            continue
        ncomp += 1
        arc = start
        while arc not in seen_arc:
            seen_arc.add(arc)
            i, under = head[arc]
            if i not in seen_x:
                seen_x.add(i)
                if under and bad is None:
                    bad = i
            arc = nxt[arc]
        if bad is not None:
            return bad, ncomp
    return None, ncomp


def _switch(x):
    a, b, c, d, s = x
    return (d, a, b, c, -1) if s > 0 else (b, c, d, a, 1)


def evaluate(crossings, loops):
    memo = {}
    old = sys.getrecursionlimit()
    need = 50 + 4 * len(crossings)
    if old < need:
        sys.setrecursionlimit(need)
    try:
        return _eval([tuple(x) for x in crossings], loops, memo)
    finally:
        if old < need:
            sys.setrecursionlimit(old)


def _eval(xs, loops, memo):
    xs, loops = simplify(xs, loops)
    if not xs:
        return [1] if loops == 1 else []
    if loops or _pieces(xs) > 1:
        return []
    key = tuple(sorted(xs))
    hit = memo.get(key)
    if hit is not None:
        return hit
    i, ncomp = _first_bad(xs)
    if i is None:
        res = [1] if ncomp == 1 else []
    else:
        x = xs[i]
        switched = xs[:i] + [_switch(x)] + xs[i + 1:]
        smoothed, sl = _merge(xs, 0, {i}, [(x[0], _over_out(x)), (_over_in(x), x[2])])
        res = _add(_eval(switched, 0, memo), _eval(smoothed, sl, memo), x[4], 1)
    memo[key] = res
    return res
