"""Rooted k-connectivity on directed graphs, and terminal merging."""

from __future__ import annotations

from fractions import Fraction

from ..core import LabelCoverInstance
from ..errors import MergeError
from ..matching import StrongColoring, is_induced_matching
from .network import (
    Builder,
    GadgetLayout,
    MergedInstance,
    NetworkInstance,
    check_parallel_projections,
    require_costs,
)


def _base(lc: LabelCoverInstance, directed: bool, with_root: bool):
    """Vertices r, u_i, A_i, w_j, B_j and the label edges (always edges 0..)."""
    c1, c2 = require_costs(lc)
    check_parallel_projections(lc)
    g = Builder(directed)
    root = g.vertex("r") if with_root else None
    u = [g.vertex(f"u{i}") for i in range(lc.n_left)]
    a = [[g.vertex(f"a{i}_{x}") for x in range(lc.n_labels_left)] for i in range(lc.n_left)]
    w = [g.vertex(f"w{j}") for j in range(lc.n_right)]
    b = [[g.vertex(f"b{j}_{y}") for y in range(lc.n_labels_right)] for j in range(lc.n_right)]
    label_edge = {}
    for i in range(lc.n_left):
        for x in range(lc.n_labels_left):
            label_edge[("L", i, x)] = g.edge(u[i], a[i][x], c1)
    for j in range(lc.n_right):
        for y in range(lc.n_labels_right):
            label_edge[("R", j, y)] = g.edge(b[j][y], w[j], c2)
    for arc in lc.arcs:
        for x, y in enumerate(arc.proj):
            g.edge(a[arc.u][x], b[arc.w][y], 0, dedupe=True)
    return g, root, u, a, w, b, label_edge


def padding_tails(lc: LabelCoverInstance, idx: int) -> list[int]:
    """Distinct left neighbours of w_j other than u_i, for arc idx = (u_i, w_j)."""
    arc = lc.arcs[idx]
    return sorted({o.u for o in lc.arcs if o.w == arc.w and o.u != arc.u})


def to_directed_rooted(lc: LabelCoverInstance):
    g, r, u, a, w, b, label_edge = _base(lc, True, True)
    for i in range(lc.n_left):
        g.edge(r, u[i], 0)
    delta = lc.max_degree()
    terminals, padding, stations = [], {}, {}
    for idx, arc in enumerate(lc.arcs):
        t = g.vertex(f"t{idx}")
        terminals.append(t)
        g.edge(w[arc.w], t, 0)
        tails = padding_tails(lc, idx)
        for i2 in tails:
            g.edge(u[i2], t, 0)
        copies = delta - 1 - len(tails)
        if copies > 0:
            g.edge(r, t, 0, mult=copies)
        padding[idx] = {"tails": tuple(u[i2] for i2 in tails)}
        stations[idx] = ((r,), (u[arc.u],), tuple(a[arc.u]), tuple(b[arc.w]), (w[arc.w],), (t,))
    net = NetworkInstance(
        directed=True,
        kind="rootedDirected",
        k=delta,
        roles=tuple(g.roles),
        edges=tuple(g.edges),
        root=r,
        terminals=tuple(terminals),
    )
    layout = GadgetLayout(label_edge, tuple((x.u, x.w) for x in lc.arcs), padding, stations)
    return net, layout


def check_class(layout: GadgetLayout, cls) -> None:
    arcs = list(layout.demand_arcs)
    if not is_induced_matching(arcs, cls):
        raise MergeError(f"color class {list(cls)} is not an induced matching")


def merge_terminals_directed(net: NetworkInstance, layout: GadgetLayout, coloring: StrongColoring) -> MergedInstance:
    """Unify the terminals of each color class into one terminal T_C.

    T_C receives one arc from each w_j of the class, one arc from each distinct
    padding tail used by the class, and enough (r, T_C) copies to reach
    k_new = k * max_C |T_C| in-arcs.
    """
    if len(coloring.color_of) != len(net.terminals):
        raise MergeError("coloring does not cover every demand")
    classes = tuple(tuple(c) for c in coloring.classes() if c)
    for cls in classes:
        check_class(layout, cls)
    k_new = net.k * max((len(c) for c in classes), default=1)
    term_set = set(net.terminals)
    n_base = min(term_set) if term_set else net.n
    assert all(v < n_base for e in net.edges for v in (e.u, e.v) if v not in term_set)

    g = Builder(True)
    g.roles = list(net.roles[:n_base])
    g.edges = [e for e in net.edges if e.v not in term_set]
    # w_j is the unique non-root, non-padding tail feeding t_e through a plain arc
    feeder = {}
    for e in net.edges:
        if e.v in term_set and net.roles[e.u].startswith("w"):
            feeder[e.v] = e.u
    terminals, padding, stations = [], {}, {}
    for c, cls in enumerate(classes):
        t = g.vertex(f"T{c}")
        terminals.append(t)
        tails = sorted({v for d in cls for v in layout.padding[d]["tails"]})
        for d in cls:
            g.edge(feeder[net.terminals[d]], t, 0)
        for v in tails:
            g.edge(v, t, 0)
        copies = k_new - len(cls) - len(tails)
        if copies > 0:
            g.edge(net.root, t, 0, mult=copies)
        padding[c] = {"tails": tuple(tails)}
        stations[c] = tuple(layout.stations[d][:-1] + ((t,),) for d in cls)
    merged = NetworkInstance(
        directed=True,
        kind="rootedDirected",
        k=k_new,
        roles=tuple(g.roles),
        edges=tuple(g.edges),
        root=net.root,
        terminals=tuple(terminals),
    )
    new_layout = GadgetLayout(layout.label_edge, layout.demand_arcs, padding, stations, classes)
    return MergedInstance(net, merged, new_layout, classes, k_new)


def merged_k_formula(k: int, classes) -> Fraction:
    return Fraction(k * max(len(c) for c in classes))
