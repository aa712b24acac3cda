"""Network instances emitted by the gadgets, and the label <-> edge layout."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..core import LabelCoverInstance, MultiLabeling
from ..errors import ConfigurationError, DomainError, PreconditionError

INF = math.inf
KINDS = ("rootedDirected", "rootedUndirected", "vcSndp", "kRouteCut")


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    cost: Fraction | float  # Fraction, or INF
    mult: int = 1

    @property
    def infinite(self) -> bool:
        return self.cost == INF

    @property
    def selectable(self) -> bool:
        return not self.infinite and self.cost > 0


@dataclass(frozen=True)
class Demand:
    s: int
    t: int
    req: int


@dataclass(frozen=True)
class NetworkInstance:
    directed: bool
    kind: str
    k: int
    roles: tuple[str, ...]
    edges: tuple[Edge, ...]
    root: int | None = None
    terminals: tuple[int, ...] = ()
    demands: tuple[Demand, ...] = ()

    @property
    def n(self) -> int:
        return len(self.roles)

    def requirements(self) -> list[Demand]:
        """Uniform view: rooted kinds become (root, terminal, k) pairs."""
        if self.kind in ("rootedDirected", "rootedUndirected"):
            return [Demand(self.root, t, self.k) for t in self.terminals]
        return list(self.demands)

    def selectable_edges(self) -> list[int]:
        return [i for i, e in enumerate(self.edges) if e.selectable]

    def edge_cost(self, chosen) -> Fraction:
        total = Fraction(0)
        for i in chosen:
            c = self.edges[i].cost
            if c == INF:
                raise DomainError(f"edge {i} has infinite cost")
            total += c * self.edges[i].mult
        return total

    def validate(self) -> list[str]:
        problems = []
        if self.k < 1:
            problems.append(f"k = {self.k} < 1")
        if self.kind not in KINDS:
            problems.append(f"unknown kind {self.kind}")
        for i, e in enumerate(self.edges):
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                problems.append(f"edge {i} endpoint out of range")
            if e.mult < 1:
                problems.append(f"edge {i} multiplicity {e.mult} < 1")
            if e.infinite and self.kind != "kRouteCut":
                problems.append(f"edge {i}: infinite cost in a design instance")
            if not e.infinite and e.cost < 0:
                problems.append(f"edge {i}: negative cost")
        return problems

    def max_indegree(self) -> dict[int, int]:
        deg: dict[int, int] = {}
        for e in self.edges:
            deg[e.v] = deg.get(e.v, 0) + e.mult
        return deg


@dataclass(frozen=True)
class GadgetLayout:
    """Provenance from network elements back to the label-cover instance.

    ``label_edge`` maps ``("L", u, a)`` / ``("R", w, b)`` to an edge index.
    ``demand_arcs[d]`` is the ``(u, w)`` pair of the arc behind demand ``d``.
    ``padding[d]`` holds named vertex sets; ``stations[d]`` is the ordered
    sequence of vertex sets a canonical path passes through.
    """

    label_edge: dict
    demand_arcs: tuple[tuple[int, int], ...]
    padding: dict = field(default_factory=dict)
    stations: dict = field(default_factory=dict)
    classes: tuple[tuple[int, ...], ...] = ()

    def edge_label(self) -> dict[int, tuple]:
        return {e: key for key, e in self.label_edge.items()}

    def ordered_label_edges(self) -> list[int]:
        """Label edges in (side, vertex, label) order: the enumeration bit order."""
        return [self.label_edge[k] for k in sorted(self.label_edge, key=lambda k: (k[0] != "L", k[1], k[2]))]


@dataclass(frozen=True)
class MergedInstance:
    base: NetworkInstance
    merged: NetworkInstance
    layout: GadgetLayout
    classes: tuple[tuple[int, ...], ...]
    k_new: int

    @property
    def merged_demand_count(self) -> int:
        return len(self.classes)


class Builder:
    """Accumulates vertices and edges; zero-cost undirected edges can be deduplicated."""

    def __init__(self, directed: bool):
        self.directed = directed
        self.roles: list[str] = []
        self.edges: list[Edge] = []
        self._free: set = set()

    def vertex(self, role: str) -> int:
        self.roles.append(role)
        return len(self.roles) - 1

    def edge(self, u: int, v: int, cost, mult: int = 1, dedupe: bool = False) -> int | None:
        if u == v:
            raise PreconditionError(f"self-loop at {self.roles[u]}")
        key = (u, v, cost) if self.directed else (min(u, v), max(u, v), cost)
        if dedupe:
            if key in self._free:
                return None
            self._free.add(key)
        self.edges.append(Edge(u, v, cost if cost == INF else Fraction(cost), mult))
        return len(self.edges) - 1

    def neighbors(self) -> list[set[int]]:
        nb = [set() for _ in self.roles]
        for e in self.edges:
            nb[e.u].add(e.v)
            nb[e.v].add(e.u)
        return nb


def require_costs(lc: LabelCoverInstance) -> tuple[Fraction, Fraction]:
    if not lc.has_costs:
        raise ConfigurationError("gadget construction needs label costs")
    if lc.cost_left <= 0 or lc.cost_right <= 0:
        raise ConfigurationError("gadgets need positive label costs (label edges must be the priced edges)")
    return lc.cost_left, lc.cost_right


def check_parallel_projections(lc: LabelCoverInstance) -> None:
    seen = {}
    for idx, arc in enumerate(lc.arcs):
        prev = seen.setdefault((arc.u, arc.w), arc.proj)
        if prev != arc.proj:
            raise PreconditionError(f"arc {idx}: parallel arcs ({arc.u},{arc.w}) carry different projections")


def line_graph_near(lc: LabelCoverInstance) -> list[list[int]]:
    """For each arc, arcs at line-graph distance 1 or 2, in index order."""
    from ..matching import conflict_sets

    return [sorted(s) for s in conflict_sets(lc)]


def solution_to_labeling(lc: LabelCoverInstance, layout: GadgetLayout, solution) -> MultiLabeling:
    lookup = layout.edge_label()
    left = [set() for _ in range(lc.n_left)]
    right = [set() for _ in range(lc.n_right)]
    for e in solution:
        if e not in lookup:
            raise DomainError(f"edge {e} is not a label edge")
        side, v, lab = lookup[e]
        (left if side == "L" else right)[v].add(lab)
    return MultiLabeling(tuple(map(frozenset, left)), tuple(map(frozenset, right)))


def labeling_to_solution(layout: GadgetLayout, m: MultiLabeling) -> list[int]:
    out = [layout.label_edge[("L", u, a)] for u, s in enumerate(m.left) for a in s]
    out += [layout.label_edge[("R", w, b)] for w, s in enumerate(m.right) for b in s]
    return sorted(out)
