"""Strong edge coloring of bipartite constraint graphs.

Arcs are ``(u, w)`` pairs with ``u`` on the left and ``w`` on the right; two
arcs conflict when they share an endpoint or some arc joins their endpoints.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass

from .core import LabelCoverInstance


@dataclass(frozen=True)
class StrongColoring:
    color_of: tuple[int, ...]

    @property
    def color_count(self) -> int:
        return max(self.color_of, default=-1) + 1

    def classes(self) -> list[list[int]]:
        out = [[] for _ in range(self.color_count)]
        for arc, c in enumerate(self.color_of):
            out[c].append(arc)
        return out


def endpoints(graph) -> list[tuple[int, int]]:
    if isinstance(graph, LabelCoverInstance):
        return [(a.u, a.w) for a in graph.arcs]
    return [tuple(e) for e in graph]


def max_degree(graph) -> int:
    ends = endpoints(graph)
    ldeg = defaultdict(int)
    rdeg = defaultdict(int)
    for u, w in ends:
        ldeg[u] += 1
        rdeg[w] += 1
    return max(list(ldeg.values()) + list(rdeg.values()) + [0])


def conflict_sets(graph) -> list[frozenset[int]]:
    """For each arc, the arcs at line-graph distance 1 or 2 (parallel copies included)."""
    ends = endpoints(graph)
    at_u = defaultdict(list)
    at_w = defaultdict(list)
    for i, (u, w) in enumerate(ends):
        at_u[u].append(i)
        at_w[w].append(i)
    out = []
    for i, (u, w) in enumerate(ends):
        near = set(at_u[u]) | set(at_w[w])
        for j in list(near):
            uj, wj = ends[j]
            near.update(at_u[uj])
            near.update(at_w[wj])
        near.discard(i)
        out.append(frozenset(near))
    return out


def _conflict(ends, edge_set, i, j) -> bool:
    (u1, w1), (u2, w2) = ends[i], ends[j]
    return u1 == u2 or w1 == w2 or (u1, w2) in edge_set or (u2, w1) in edge_set


def is_induced_matching(graph, arc_set) -> bool:
    ends = endpoints(graph)
    ids = list(arc_set)
    for i in ids:
        if not 0 <= i < len(ends):
            raise KeyError(f"unknown arc id {i}")
    if len(set(ids)) != len(ids):
        return False
    edge_set = set(ends)
    return not any(_conflict(ends, edge_set, i, j) for i, j in itertools.combinations(ids, 2))


def strong_edge_color(graph) -> StrongColoring:
    """Greedy in arc order: each arc takes the smallest color unused by its conflicts."""
    conflicts = conflict_sets(graph)
    colors: list[int] = []
    for i, conf in enumerate(conflicts):
        used = {colors[j] for j in conf if j < i}
        c = 0
        while c in used:
            c += 1
        colors.append(c)
    coloring = StrongColoring(tuple(colors))
    delta = max_degree(graph)
    assert coloring.color_count <= max(1, 2 * delta * delta), "greedy exceeded 2*Delta^2 colors"
    return coloring


def is_valid_coloring(graph, coloring: StrongColoring) -> bool:
    if len(coloring.color_of) != len(endpoints(graph)):
        return False
    return all(is_induced_matching(graph, cls) for cls in coloring.classes())


def minimum_strong_coloring(graph, cap: int = 1 << 20) -> StrongColoring:
    """Exhaustive minimum strong coloring, for tiny graphs only (test oracle)."""
    ends = endpoints(graph)
    m = len(ends)
    if m == 0:
        return StrongColoring(())
    conflicts = conflict_sets(graph)
    for k in range(1, m + 1):
        if k**m > cap and k > 1:
            raise RuntimeError(f"minimum_strong_coloring: {k}^{m} exceeds cap {cap}")
        colors = [-1] * m

        def place(i):
            if i == m:
                return True
            used = {colors[j] for j in conflicts[i] if colors[j] >= 0}
            # symmetry break: arc i may open at most one new color
            top = max(colors[:i], default=-1) + 1
            for c in range(min(k, top + 1)):
                if c not in used:
                    colors[i] = c
                    if place(i + 1):
                        return True
            colors[i] = -1
            return False

        if place(0):
            return StrongColoring(tuple(colors))
    raise AssertionError("unreachable: m colors always suffice")
