"""Shared instance builders and hypothesis strategies for the test suite."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from lc2conn.core import Arc, LabelCoverInstance, instance
from lc2conn.rng import stream

# K3: K2,2 over L = {0, 1}; identity projections except u1w1 (0-based), which swaps.
IDENT = (0, 1)
SWAP = (1, 0)


def k1(costs=None):
    return instance(1, 1, 2, 1, [(0, 0, (0, 0))], costs=costs)


def k3(costs=None):
    return instance(2, 2, 2, 2, [(0, 0, IDENT), (0, 1, IDENT), (1, 0, IDENT), (1, 1, SWAP)], costs=costs)


def random_costed(seed: int, max_side: int = 3, max_labels: int = 3, max_cost: int = 3) -> LabelCoverInstance:
    """Arbitrary small instance: random edge set (no isolated vertex), projections and positive costs."""
    rng = stream(seed, "tests", "random_costed")
    nu = int(rng.integers(1, max_side + 1))
    nw = int(rng.integers(1, max_side + 1))
    l1 = int(rng.integers(1, max_labels + 1))
    l2 = int(rng.integers(1, max_labels + 1))
    pairs = {(u, int(rng.integers(nw))) for u in range(nu)}
    pairs |= {(int(rng.integers(nu)), w) for w in range(nw)}
    for u in range(nu):
        for w in range(nw):
            if rng.random() < 0.3:
                pairs.add((u, w))
    arcs = [(u, w, tuple(int(b) for b in rng.integers(l2, size=l1))) for u, w in sorted(pairs)]
    costs = (int(rng.integers(1, max_cost + 1)), int(rng.integers(1, max_cost + 1)))
    return instance(nu, nw, l1, l2, arcs, costs=costs)


def biregular(seed: int, nu: int, big_d: int, d2: int, l1: int, l2: int) -> LabelCoverInstance:
    """(big_d*d2, d2)-biregular instance on nu + nu*big_d vertices with random projections."""
    rng = stream(seed, "tests", "biregular")
    nw = nu * big_d
    d1 = big_d * d2
    assert d1 <= nw
    arcs = []
    for u in range(nu):
        for j in range(d1):
            w = (u * big_d + j) % nw
            arcs.append(Arc(u, w, tuple(int(b) for b in rng.integers(l2, size=l1))))
    return LabelCoverInstance(nu, nw, l1, l2, tuple(arcs), multi_arc=True)


def circulant_regular(n: int, delta: int, labels: int, seed: int) -> LabelCoverInstance:
    """delta-regular bipartite instance on n + n vertices: u is joined to w = u, ..., u + delta - 1 mod n."""
    rng = stream(seed, "tests", "circulant")
    arcs = tuple(
        Arc(u, (u + j) % n, tuple(int(b) for b in rng.integers(labels, size=labels)))
        for u in range(n)
        for j in range(delta)
    )
    return LabelCoverInstance(n, n, labels, labels, arcs)


@st.composite
def label_cover(draw, max_side=3, max_labels=3, costs=False, min_arcs=1):
    nu = draw(st.integers(1, max_side))
    nw = draw(st.integers(1, max_side))
    l1 = draw(st.integers(1, max_labels))
    l2 = draw(st.integers(1, max_labels))
    pairs = draw(
        st.lists(st.tuples(st.integers(0, nu - 1), st.integers(0, nw - 1)), min_size=min(min_arcs, nu * nw), max_size=nu * nw, unique=True)
    )
    arcs = [(u, w, tuple(draw(st.lists(st.integers(0, l2 - 1), min_size=l1, max_size=l1)))) for u, w in pairs]
    c = None
    if costs:
        c = (Fraction(draw(st.integers(1, 4))), Fraction(draw(st.integers(1, 4))))
    return instance(nu, nw, l1, l2, arcs, costs=c)


@st.composite
def labelings(draw, inst):
    from lc2conn.core import Labeling

    left = tuple(draw(st.integers(0, inst.n_labels_left - 1)) for _ in range(inst.n_left))
    right = tuple(draw(st.integers(0, inst.n_labels_right - 1)) for _ in range(inst.n_right))
    return Labeling(left, right)


@st.composite
def multi_labelings(draw, inst, nonempty=False):
    from lc2conn.core import MultiLabeling

    lo = 1 if nonempty else 0
    left = tuple(
        frozenset(draw(st.sets(st.integers(0, inst.n_labels_left - 1), min_size=lo))) for _ in range(inst.n_left)
    )
    right = tuple(
        frozenset(draw(st.sets(st.integers(0, inst.n_labels_right - 1), min_size=lo))) for _ in range(inst.n_right)
    )
    return MultiLabeling(left, right)


@st.composite
def bipartite_graphs(draw, max_side=6, max_edges=14):
    nu = draw(st.integers(1, max_side))
    nw = draw(st.integers(1, max_side))
    return draw(
        st.lists(st.tuples(st.integers(0, nu - 1), st.integers(0, nw - 1)), min_size=0, max_size=max_edges, unique=True)
    )


def random_bipartite(seed: int, max_side: int = 8, p: float = 0.35) -> list[tuple[int, int]]:
    rng = np.random.default_rng(seed)
    nu = int(rng.integers(1, max_side + 1))
    nw = int(rng.integers(1, max_side + 1))
    return [(u, w) for u in range(nu) for w in range(nw) if rng.random() < p]
