"""Vertex-connectivity k-route cut, and class-level demand merging.

Each demand ij gets its own source s_ij and sink t_ij. Sharing one source per
left vertex (and one sink per right vertex) puts s_i next to every separator
of every Q_ij' path and joins s_i to t_j directly as soon as some vertex has
degree 2, which leaves no demand cuttable.
"""

from __future__ import annotations

from ..core import LabelCoverInstance
from ..errors import MergeError
from ..matching import StrongColoring
from .directed import check_class
from .network import (
    INF,
    Builder,
    Demand,
    GadgetLayout,
    MergedInstance,
    NetworkInstance,
    check_parallel_projections,
    require_costs,
)


def psi_order(proj, n_labels_right: int) -> list[int]:
    """Left labels grouped into preimage blocks of b = 0, 1, ..., ascending inside a block."""
    return sorted(range(len(proj)), key=lambda x: (proj[x], x))


def to_kroute_cut(lc: LabelCoverInstance):
    c1, c2 = require_costs(lc)
    check_parallel_projections(lc)
    n1, n2 = lc.n_labels_left, lc.n_labels_right
    g = Builder(False)
    a = [[g.vertex(f"a{i}_{x}") for x in range(n1)] for i in range(lc.n_left)]
    a2 = [[g.vertex(f"a'{i}_{x}") for x in range(n1)] for i in range(lc.n_left)]
    b = [[g.vertex(f"b{j}_{y}") for y in range(n2)] for j in range(lc.n_right)]
    b2 = [[g.vertex(f"b'{j}_{y}") for y in range(n2)] for j in range(lc.n_right)]
    label_edge = {}
    for i in range(lc.n_left):
        for x in range(n1):
            label_edge[("L", i, x)] = g.edge(a[i][x], a2[i][x], c1)
    for j in range(lc.n_right):
        for y in range(n2):
            label_edge[("R", j, y)] = g.edge(b[j][y], b2[j][y], c2)
    # P_j: b_1 b'_1 b_2 b'_2 ... joined by infinite links b'_l -- b_{l+1}
    path_p = []
    for j in range(lc.n_right):
        for y in range(n2 - 1):
            g.edge(b2[j][y], b[j][y + 1], INF)
        path_p.append(tuple(v for y in range(n2) for v in (b[j][y], b2[j][y])))

    m = len(lc.arcs)
    core, path_q, seps, src, snk = [], [], [], [], []
    for e, arc in enumerate(lc.arcs):
        i, j = arc.u, arc.w
        order = psi_order(arc.proj, n2)
        xs = [g.vertex(f"x{e}_{p}") for p in range(1, n1)]
        seq = []
        for p, lab in enumerate(order):
            seq += [a[i][lab], a2[i][lab]]
            if p < n1 - 1:
                g.edge(a2[i][lab], xs[p], INF)
                g.edge(xs[p], a[i][order[p + 1]], INF)
                seq.append(xs[p])

        def pos(p):
            if p == 0:
                return a[i][order[0]]
            if p == n1:
                return a2[i][order[-1]]
            return xs[p - 1]

        cum = 0
        for y in range(n2 - 1):
            cum += sum(1 for x in range(n1) if arc.proj[x] == y)
            g.edge(pos(cum), b2[j][y], INF, dedupe=True)
            g.edge(pos(cum), b[j][y + 1], INF, dedupe=True)
        s = g.vertex(f"s{e}")
        t = g.vertex(f"t{e}")
        g.edge(s, pos(0), INF)
        g.edge(s, b[j][0], INF)
        g.edge(t, pos(n1), INF)
        g.edge(t, b2[j][n2 - 1], INF)
        src.append(s)
        snk.append(t)
        seps.append(tuple(xs))
        path_q.append(tuple(seq))
        core.append(set(seq) | set(path_p[j]) | {s, t})

    # Z_e = N(C_e) \ C_e on the final graph: least fixed point, since joining
    # s_e, t_e to Z_e can make them neighbours of another demand's core.
    zsets = [set() for _ in range(m)]
    joined = [set() for _ in range(m)]
    while True:
        nb = g.neighbors()
        changed = False
        for e in range(m):
            new = set().union(*(nb[v] for v in core[e])) - core[e]
            if new != zsets[e]:
                zsets[e] = new
                changed = True
        if not changed:
            break
        for e in range(m):
            for v in sorted(zsets[e] - joined[e]):
                g.edge(src[e], v, INF)
                g.edge(snk[e], v, INF)
                joined[e].add(v)
    z = max((len(s) for s in zsets), default=0)
    k = z + 1

    padding, stations, demands = {}, {}, []
    for e in range(m):
        ss = [g.vertex(f"S{e}_{p}") for p in range(z - len(zsets[e]))]
        for v in ss:
            g.edge(src[e], v, INF)
            g.edge(snk[e], v, INF)
        demands.append(Demand(src[e], snk[e], k))
        padding[e] = {
            "Z": tuple(sorted(zsets[e])),
            "S": tuple(ss),
            "X": seps[e],
            "Q": path_q[e],
            "P": path_p[lc.arcs[e].w],
        }
        stations[e] = (path_q[e], path_p[lc.arcs[e].w])
    net = NetworkInstance(
        directed=False,
        kind="kRouteCut",
        k=k,
        roles=tuple(g.roles),
        edges=tuple(g.edges),
        demands=tuple(demands),
    )
    return net, GadgetLayout(label_edge, tuple((x.u, x.w) for x in lc.arcs), padding, stations)


def demand_core(net: NetworkInstance, layout: GadgetLayout, d: int) -> set[int]:
    pad = layout.padding[d]
    dem = net.demands[d]
    return set(pad["Q"]) | set(pad["P"]) | {dem.s, dem.t}


def independence_witness(net: NetworkInstance, layout: GadgetLayout, d1: int, d2: int):
    """A vertex shared by one demand's (core + S) and the other's (core + Z + S), or None."""
    for x, y in ((d1, d2), (d2, d1)):
        own = demand_core(net, layout, x) | set(layout.padding[x]["S"])
        other = demand_core(net, layout, y) | set(layout.padding[y]["Z"]) | set(layout.padding[y]["S"])
        shared = own & other
        if shared:
            return min(shared)
    return None


def merge_demands_kroute(net: NetworkInstance, layout: GadgetLayout, coloring: StrongColoring) -> MergedInstance:
    """Group demands by color class; the graph and k are unchanged.

    A removal set is feasible for a class iff it cuts every pair in the class,
    so the grouping is OPT-preserving by definition. Each class is certified
    by checking that no member's core or S-set meets another member's
    neighbourhood (core + Z + S).
    """
    if len(coloring.color_of) != len(net.demands):
        raise MergeError("coloring does not cover every demand")
    classes = tuple(tuple(c) for c in coloring.classes() if c)
    for cls in classes:
        check_class(layout, cls)
        for p, d1 in enumerate(cls):
            for d2 in cls[p + 1:]:
                v = independence_witness(net, layout, d1, d2)
                if v is not None:
                    raise MergeError(
                        f"demands {d1} and {d2} share vertex {v} ({net.roles[v]}); class {list(cls)} rejected"
                    )
    new_layout = GadgetLayout(layout.label_edge, layout.demand_arcs, layout.padding, layout.stations, classes)
    return MergedInstance(net, net, new_layout, classes, net.k)
