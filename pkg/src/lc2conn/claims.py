"""Structural invariants registered per network kind, evaluated on emitted instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gadgets.network import GadgetLayout, NetworkInstance
from .matching import is_induced_matching, max_degree
from .oracle import FlowGraph, check_cut_solution, check_design_solution


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    measured: str = ""
    formula: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "measured": self.measured, "formula": self.formula}


def source_shape(layout: GadgetLayout) -> tuple[int, int, int, int, int]:
    """(|U|, |W|, |L1|, |L2|, Delta) of the label-cover instance behind a layout."""
    keys = layout.label_edge.keys()
    nu = 1 + max((v for s, v, _ in keys if s == "L"), default=-1)
    nw = 1 + max((v for s, v, _ in keys if s == "R"), default=-1)
    l1 = 1 + max((x for s, _, x in keys if s == "L"), default=-1)
    l2 = 1 + max((x for s, _, x in keys if s == "R"), default=-1)
    return nu, nw, l1, l2, max_degree(layout.demand_arcs)


def _generic(net: NetworkInstance, layout: GadgetLayout | None) -> list[Check]:
    out = []
    problems = net.validate()
    out.append(Check("well_formed", not problems, "; ".join(problems) or "ok"))
    if layout is not None:
        nu, nw, l1, l2, _ = source_shape(layout)
        label_edges = sorted(layout.label_edge.values())
        expected = nu * l1 + nw * l2
        ok = len(set(label_edges)) == expected and label_edges == net.selectable_edges()
        out.append(
            Check("label_edge_bijection", ok, f"{len(set(label_edges))} label edges", "|U|*|L1| + |W|*|L2| = " + str(expected))
        )
    return out


def _completeness(net: NetworkInstance, flow: FlowGraph) -> list[Check]:
    sel = net.selectable_edges()
    if net.kind == "kRouteCut":
        intact, _, counts0 = check_cut_solution(net, [], flow)
        full, _, counts1 = check_cut_solution(net, sel, flow)
        return [
            Check("nothing_removed_is_infeasible", not intact, f"min count {min(counts0, default=0)}", f"k = {net.k}"),
            Check("all_label_edges_removed_is_feasible", full, f"max count {max(counts1, default=0)}", f"< k = {net.k}"),
        ]
    full, _, counts = check_design_solution(net, sel, flow)
    return [Check("all_label_edges_feasible", full, f"min count {min(counts, default=0)}", f"k = {net.k}")]


def claims(net: NetworkInstance, layout: GadgetLayout | None = None) -> list[Check]:
    flow = FlowGraph.of(net)
    out = _generic(net, layout)
    out += _completeness(net, flow)
    if layout is None:
        return out
    nu, nw, l1, l2, delta = source_shape(layout)
    maxl = max(l1, l2)
    if layout.classes:
        bound = 2 * delta * delta
        out.append(
            Check("merged_demands_le_2Delta^2", len(layout.classes) <= max(1, bound), str(len(layout.classes)), f"2*Delta^2 = {bound}")
        )
        ok = all(is_induced_matching(list(layout.demand_arcs), c) for c in layout.classes)
        out.append(Check("classes_are_induced_matchings", ok, f"{len(layout.classes)} classes"))
    if net.kind == "rootedDirected":
        indeg = net.max_indegree()
        if layout.classes:
            k_new = net.k
            expect = max(len(c) for c in layout.classes) * delta
            out.append(Check("k_new = k*max|T_C|", k_new == expect, str(k_new), f"Delta*max|T_C| = {expect}"))
        else:
            out.append(Check("k = Delta", net.k == delta, str(net.k), f"Delta = {delta}"))
        bad = [t for t in net.terminals if indeg.get(t, 0) != net.k]
        out.append(Check("terminal_indegree = k", not bad, f"{len(bad)} terminals off", f"k = {net.k}"))
    elif net.kind == "rootedUndirected":
        sizes = [len(p["Q"]) for p in layout.padding.values()]
        formula_ok = all(
            len(p["Q"]) == net.k - len(p["Z"]) - len(p["Y"]) - 1 and len(p["X"]) == len(p["Z"]) + 1
            for p in layout.padding.values()
        )
        out.append(Check("|Q| = k-|Z|-|Y|-1 >= 0, |X| = |Z|+1", formula_ok and min(sizes, default=0) >= 0, f"min |Q| = {min(sizes, default=0)}"))
        bound = 16 * (delta**3 * maxl + delta**4)
        out.append(Check("k <= 16(Delta^3 maxL + Delta^4)", net.k <= bound, str(net.k), f"16(Delta^3 maxL + Delta^4) = {bound}"))
        out.append(_canonical_paths(net, layout))
    elif net.kind == "vcSndp":
        bound = 2 * delta * maxl + 4 * delta * delta + 1
        out.append(Check("k <= 2 Delta maxL + 4 Delta^2 + 1", net.k <= bound, str(net.k), f"2*Delta*maxL + 4*Delta^2 + 1 = {bound}"))
        out.append(Check("req = k", all(d.req == net.k for d in net.demands), str(net.k)))
    elif net.kind == "kRouteCut":
        z = max((len(p["Z"]) for p in layout.padding.values()), default=0)
        out.append(Check("k = z+1", net.k == z + 1, str(net.k), f"z+1 = {z + 1}"))
        out.append(
            Check("|S| = z-|Z|", all(len(p["S"]) == z - len(p["Z"]) for p in layout.padding.values()), f"z = {z}")
        )
        counts = [flow.count(d.s, d.t) for d in net.demands]
        out.append(
            Check("k <= intact count <= k+1", all(net.k <= c <= net.k + 1 for c in counts), f"counts {sorted(set(counts))}", f"[{net.k}, {net.k + 1}]")
        )
        twos = []
        for d, dem in enumerate(net.demands):
            rm = set(layout.padding[d]["Z"]) | set(layout.padding[d]["S"])
            active = np.array([not (e.u in rm or e.v in rm) for e in net.edges], dtype=bool)
            twos.append(flow.count(dem.s, dem.t, active))
        out.append(Check("count after deleting Z and S = 2", all(c == 2 for c in twos), f"counts {sorted(set(twos))}", "2"))
    return out


def _canonical_paths(net: NetworkInstance, layout: GadgetLayout) -> Check:
    """Each demand's stations are consecutively adjacent and avoid its Z, Y, Q sets."""
    adj = set()
    for e in net.edges:
        adj.add((e.u, e.v))
        adj.add((e.v, e.u))
    bad = 0
    for d, st in layout.stations.items():
        pad = layout.padding[d]
        avoid = set(pad.get("Z", ())) | set(pad.get("Y", ())) | set(pad.get("Q", ()))
        interior = [v for group in st[1:-1] for v in group]
        linked = all(any((x, y) in adj for x in g1 for y in g2) for g1, g2 in zip(st, st[1:]))
        if not linked or avoid & set(interior):
            bad += 1
    return Check("canonical_path_stations", bad == 0, f"{bad} demands off")


def all_pass(checks) -> bool:
    return all(c.passed for c in checks)


def fmt_table(checks) -> str:
    width = max((len(c.name) for c in checks), default=10)
    rows = []
    for c in checks:
        extra = f"  measured={c.measured}" if c.measured else ""
        extra += f"  formula: {c.formula}" if c.formula else ""
        rows.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name.ljust(width)}{extra}")
    return "\n".join(rows)


__all__ = ["Check", "claims", "all_pass", "fmt_table", "source_shape"]
