"""Rooted k-connectivity on undirected graphs, and VC-SNDP."""

from __future__ import annotations

from ..core import LabelCoverInstance
from .directed import _base
from .network import Demand, GadgetLayout, NetworkInstance, line_graph_near


def _z1(lc: LabelCoverInstance, idx: int, a, b) -> list[int]:
    """Label vertices of the other endpoints' neighbours: A_i' for i' ~ w_j, B_j' for j' ~ u_i."""
    arc = lc.arcs[idx]
    lefts = sorted({o.u for o in lc.arcs if o.w == arc.w and o.u != arc.u})
    rights = sorted({o.w for o in lc.arcs if o.u == arc.u and o.w != arc.w})
    return [v for i2 in lefts for v in a[i2]] + [v for j2 in rights for v in b[j2]]


def to_undirected_rooted(lc: LabelCoverInstance):
    g, r, u, a, w, b, label_edge = _base(lc, False, True)
    near = line_graph_near(lc)
    m = len(lc.arcs)
    terminals = [g.vertex(f"t{e}") for e in range(m)]
    z = [_z1(lc, e, a, b) + [terminals[f] for f in near[e]] for e in range(m)]
    cliques = [[g.vertex(f"x{e}_{p}") for p in range(len(z[e]) + 1)] for e in range(m)]
    y = [[v for f in near[e] for v in cliques[f]] for e in range(m)]
    k = max((len(z[e]) + len(y[e]) for e in range(m)), default=0) + 1

    padding, stations = {}, {}
    for e, arc in enumerate(lc.arcs):
        t, xs = terminals[e], cliques[e]
        for p, x in enumerate(xs):
            g.edge(r, x, 0, dedupe=True)
            g.edge(x, u[arc.u], 0, dedupe=True)
            for x2 in xs[p + 1:]:
                g.edge(x, x2, 0, dedupe=True)
        g.edge(w[arc.w], t, 0, dedupe=True)
        for v in y[e]:
            g.edge(v, t, 0, dedupe=True)
        for v in z[e]:
            for x in xs:
                g.edge(x, v, 0, dedupe=True)
            g.edge(v, t, 0, dedupe=True)
        qs = [g.vertex(f"q{e}_{p}") for p in range(k - len(z[e]) - len(y[e]) - 1)]
        for q in qs:
            g.edge(r, q, 0)
            g.edge(q, t, 0)
        padding[e] = {"X": tuple(xs), "Z": tuple(z[e]), "Y": tuple(y[e]), "Q": tuple(qs)}
        stations[e] = ((r,), tuple(xs), (u[arc.u],), tuple(a[arc.u]), tuple(b[arc.w]), (w[arc.w],), (t,))
    net = NetworkInstance(
        directed=False,
        kind="rootedUndirected",
        k=k,
        roles=tuple(g.roles),
        edges=tuple(g.edges),
        root=r,
        terminals=tuple(terminals),
    )
    return net, GadgetLayout(label_edge, tuple((x.u, x.w) for x in lc.arcs), padding, stations)


def to_vc_sndp(lc: LabelCoverInstance):
    g, _, u, a, w, b, label_edge = _base(lc, False, False)
    near = line_graph_near(lc)
    m = len(lc.arcs)
    src = [g.vertex(f"s{e}") for e in range(m)]
    snk = [g.vertex(f"t{e}") for e in range(m)]
    z = [_z1(lc, e, a, b) for e in range(m)]
    y = [[v for f in near[e] for v in (src[f], snk[f])] for e in range(m)]
    k = max((len(set(z[e]) | set(y[e])) for e in range(m)), default=0) + 1

    padding, stations, demands = {}, {}, []
    for e, arc in enumerate(lc.arcs):
        s, t = src[e], snk[e]
        g.edge(s, u[arc.u], 0, dedupe=True)
        g.edge(w[arc.w], t, 0, dedupe=True)
        for v in sorted(set(y[e]) | set(z[e])):
            g.edge(s, v, 0, dedupe=True)
            g.edge(v, t, 0, dedupe=True)
        qs = [g.vertex(f"q{e}_{p}") for p in range(k - len(set(z[e]) | set(y[e])) - 1)]
        for q in qs:
            g.edge(s, q, 0)
            g.edge(q, t, 0)
        demands.append(Demand(s, t, k))
        padding[e] = {"Z": tuple(z[e]), "Y": tuple(y[e]), "Q": tuple(qs)}
        stations[e] = ((s,), (u[arc.u],), tuple(a[arc.u]), tuple(b[arc.w]), (w[arc.w],), (t,))
    net = NetworkInstance(
        directed=False,
        kind="vcSndp",
        k=k,
        roles=tuple(g.roles),
        edges=tuple(g.edges),
        demands=tuple(demands),
    )
    return net, GadgetLayout(label_edge, tuple((x.u, x.w) for x in lc.arcs), padding, stations)
