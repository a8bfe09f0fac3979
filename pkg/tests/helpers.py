"""Diagram generators shared by the tests."""
import random

from knotforge.diagram import Crossing, Diagram, _leaves, _local_crossing


def braid_closure(word, strands):
    """Closure of a braid word; generator i>0 is sigma_i, negative is its inverse."""
    labels = list(range(1, strands + 1))
    first = list(labels)
    nxt = strands + 1
    xs = []
    for g in word:
        i = abs(g) - 1
        left, right = labels[i], labels[i + 1]
        tl, tr = nxt, nxt + 1
        nxt += 2
        arcs = {"SW": left, "SE": right, "NW": tl, "NE": tr}
        xs.append(_local_crossing(arcs, ("SW", "NE"), ("SE", "NW"), 1 if g > 0 else -1))
        labels[i], labels[i + 1] = tl, tr
    # close up: top label k is glued to bottom label k
    glue = {top: bot for top, bot in zip(labels, first)}
    used = {a for x in xs for a in x[:4]}
    loops = sum(1 for top, bot in zip(labels, first) if top == bot and top not in used)

    def f(a):
        seen = set()
        while a in glue and glue[a] != a and a not in seen:
            seen.add(a)
            a = glue[a]
        return a

    xs = [Crossing(*(f(a) for a in x[:4]), x.sign) for x in xs]
    return Diagram(tuple(xs), loops).renumbered()


def random_braid_diagram(rng: random.Random, max_crossings=10, strands=None):
    strands = strands or rng.randint(2, 4)
    n = rng.randint(1, max_crossings)
    word = [rng.choice([1, -1]) * rng.randint(1, strands - 1) for _ in range(n)]
    return braid_closure(word, strands)


def r1_kink(d: Diagram, arc: int, positive: bool = True) -> Diagram:
    """Put a kink on ``arc`` just before its head."""
    new_head = d.max_arc() + 1
    loop = new_head + 1
    xs = []
    for x in d.crossings:
        vals = list(x[:4])
        for slot in range(4):
            if vals[slot] == arc and not _leaves(x, slot):
                vals[slot] = new_head
        xs.append(Crossing(*vals, x.sign))
    if positive:
        kink = Crossing(arc, new_head, loop, loop, 1)
    else:
        kink = Crossing(arc, loop, loop, new_head, -1)
    return Diagram(tuple(xs) + (kink,), d.loops)


TREFOIL = Diagram.from_pd([(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)])
FIGURE_EIGHT = Diagram.from_pd([(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)])
HOPF_POS = braid_closure([1, 1], 2)
TORUS_2_4 = braid_closure([1, 1, 1, 1], 2)
