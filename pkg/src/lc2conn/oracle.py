"""Ground truth for network instances: openly-disjoint path counting,
solution checkers, exhaustive optima, and gap experiments.

Vertex connectivity is computed by max-flow on the vertex-split graph: vertex
v becomes v_in = 2v and v_out = 2v + 1 joined by a unit arc, and every edge
becomes arcs between the split copies.
"""

from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import maximum_flow

from . import core
from .errors import CapExceeded, DomainError, PreconditionError
from .gadgets.network import INF, GadgetLayout, NetworkInstance

DEFAULT_EDGE_CAP = 24


@dataclass(frozen=True)
class FlowCertificate:
    s: int
    t: int
    path_count: int
    witness_paths: tuple[tuple[int, ...], ...] = ()
    cut_vertices: tuple[int, ...] = ()
    direct_edges: int = 0

    @property
    def menger_ok(self) -> bool:
        return len(self.cut_vertices) + self.direct_edges == self.path_count


class FlowGraph:
    """Vertex-split flow network over a fixed edge list; edges switch on/off by mask."""

    def __init__(self, n: int, edges, directed: bool):
        self.n = n
        self.directed = directed
        self.edges = [(e[0], e[1], e[2]) for e in edges]  # (u, v, mult)
        big = n + 1
        self.big = big
        rows, cols, owner = [], [], []
        for v in range(n):
            rows.append(2 * v)
            cols.append(2 * v + 1)
            owner.append(-1 - v)
        for idx, (u, v, _) in enumerate(self.edges):
            rows.append(2 * u + 1)
            cols.append(2 * v)
            owner.append(idx)
            if not directed:
                rows.append(2 * v + 1)
                cols.append(2 * u)
                owner.append(idx)
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        owner = np.asarray(owner, dtype=np.int64)
        key = rows * (2 * n) + cols
        uniq, self._pos = np.unique(key, return_inverse=True)
        self.nnz = len(uniq)
        self._rows = (uniq // (2 * n)).astype(np.int32)
        self._cols = (uniq % (2 * n)).astype(np.int32)
        indptr = np.searchsorted(self._rows, np.arange(2 * n + 1)).astype(np.int32)
        self._indptr = indptr
        self._owner = owner
        self._is_vertex = owner < 0
        self._mult = np.array([m for _, _, m in self.edges], dtype=np.int64)
        self._lookup = {int(k): i for i, k in enumerate(uniq)}

    @classmethod
    def of(cls, net: NetworkInstance) -> FlowGraph:
        return cls(net.n, [(e.u, e.v, e.mult) for e in net.edges], net.directed)

    def _key(self, x: int, y: int) -> int:
        return x * 2 * self.n + y

    def _capacities(self, active: np.ndarray, s: int, t: int):
        """Unit vertex arcs, effectively unbounded edge arcs; direct s-t arcs counted apart."""
        eidx = np.where(self._is_vertex, 0, self._owner)
        padded = np.append(active, False)  # keeps the index valid when there are no edges
        on = padded[eidx] & ~self._is_vertex
        weights = np.where(self._is_vertex, 1, np.where(on, self.big, 0))
        cap = np.bincount(self._pos, weights=weights, minlength=self.nnz).astype(np.int64)
        cap[self._lookup[self._key(2 * s, 2 * s + 1)]] = 0
        cap[self._lookup[self._key(2 * t, 2 * t + 1)]] = 0
        direct = 0
        dkey = self._key(2 * s + 1, 2 * t)
        if dkey in self._lookup:
            pos = self._lookup[dkey]
            sel = (self._pos == pos) & on
            direct = int(self._mult[eidx[sel]].sum())
            cap[pos] = 0
        return cap, direct

    def _matrix(self, cap) -> sp.csr_matrix:
        return sp.csr_matrix(
            (cap.astype(np.int32), self._cols, self._indptr), shape=(2 * self.n, 2 * self.n)
        )

    def count(self, s: int, t: int, active=None) -> int:
        if s == t:
            raise PreconditionError("opcount needs s != t")
        active = self._active(active)
        cap, direct = self._capacities(active, s, t)
        return int(maximum_flow(self._matrix(cap), 2 * s + 1, 2 * t).flow_value) + direct

    def _active(self, active) -> np.ndarray:
        if active is None:
            return np.ones(len(self.edges), dtype=bool)
        return np.asarray(active, dtype=bool)

    def certificate(self, s: int, t: int, active=None) -> FlowCertificate:
        if s == t:
            raise PreconditionError("opcount needs s != t")
        active = self._active(active)
        cap, direct = self._capacities(active, s, t)
        mat = self._matrix(cap)
        res = maximum_flow(mat, 2 * s + 1, 2 * t)
        value = int(res.flow_value)
        flow = res.flow.tocoo()
        fdict: dict[tuple[int, int], int] = {}
        for r, c, f in zip(flow.row, flow.col, flow.data):
            if f > 0:
                fdict[(int(r), int(c))] = int(f)
        paths = self._decompose(fdict, 2 * s + 1, 2 * t, value)
        paths += [(s, t)] * direct
        cut = self._min_cut(mat, fdict, 2 * s + 1)
        return FlowCertificate(s, t, value + direct, tuple(paths), tuple(cut), direct)

    def _decompose(self, fdict, src, dst, value):
        out_arcs: dict[int, list[int]] = {}
        for (r, c), f in fdict.items():
            out_arcs.setdefault(r, []).append(c)
        for r in out_arcs:
            out_arcs[r].sort()
        remaining = dict(fdict)
        paths = []
        while len(paths) < value:
            walk = [src]
            seen = {src: 0}
            while walk[-1] != dst:
                here = walk[-1]
                nxt = next(c for c in out_arcs.get(here, []) if remaining.get((here, c), 0) > 0)
                if nxt in seen:
                    # cancel the cycle and restart this walk
                    cyc = walk[seen[nxt]:] + [nxt]
                    for a, b in zip(cyc, cyc[1:]):
                        remaining[(a, b)] -= 1
                    walk = [src]
                    seen = {src: 0}
                    continue
                seen[nxt] = len(walk)
                walk.append(nxt)
            for a, b in zip(walk, walk[1:]):
                remaining[(a, b)] -= 1
            verts = []
            for node in walk:
                v = node // 2
                if not verts or verts[-1] != v:
                    verts.append(v)
            paths.append(tuple(verts))
        return paths

    def _min_cut(self, mat, fdict, src) -> list[int]:
        coo = mat.tocoo()
        resid: dict[int, list[int]] = {}
        for r, c, cap in zip(coo.row, coo.col, coo.data):
            r, c = int(r), int(c)
            if cap - fdict.get((r, c), 0) > 0:
                resid.setdefault(r, []).append(c)
        for (r, c), f in fdict.items():
            if f > 0:
                resid.setdefault(c, []).append(r)
        reach = {src}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            for y in resid.get(x, []):
                if y not in reach:
                    reach.add(y)
                    queue.append(y)
        return sorted(v for v in range(self.n) if 2 * v in reach and 2 * v + 1 not in reach)


def opcount(net: NetworkInstance, s: int, t: int, active=None) -> FlowCertificate:
    """Openly disjoint s-t paths with witness paths and a minimum vertex cut."""
    return FlowGraph.of(net).certificate(s, t, active)


def _design_active(net: NetworkInstance, chosen) -> np.ndarray:
    active = np.array([e.cost == 0 for e in net.edges], dtype=bool)
    for i in chosen:
        if not 0 <= i < len(net.edges):
            raise DomainError(f"edge {i} does not exist")
        if net.edges[i].cost == INF:
            raise DomainError(f"edge {i} has infinite cost and cannot be chosen in a design instance")
        active[i] = True
    return active


def _cut_active(net: NetworkInstance, removed) -> np.ndarray:
    active = np.ones(len(net.edges), dtype=bool)
    for i in removed:
        if not 0 <= i < len(net.edges):
            raise DomainError(f"edge {i} does not exist")
        if net.edges[i].cost == INF:
            raise DomainError(f"edge {i} has infinite cost and cannot be removed")
        active[i] = False
    return active


def check_design_solution(net: NetworkInstance, chosen, flow: FlowGraph | None = None):
    """Returns (feasible, cost, per-demand path counts)."""
    if net.kind == "kRouteCut":
        raise PreconditionError("kRouteCut instances are checked with check_cut_solution")
    chosen = sorted(set(chosen))
    active = _design_active(net, chosen)
    flow = flow or FlowGraph.of(net)
    counts = [flow.count(d.s, d.t, active) for d in net.requirements()]
    feasible = all(c >= d.req for c, d in zip(counts, net.requirements()))
    return feasible, net.edge_cost(chosen), counts


def check_cut_solution(net: NetworkInstance, removed, flow: FlowGraph | None = None):
    """Returns (feasible, cost, per-demand path counts); feasible iff every count < req."""
    if net.kind != "kRouteCut":
        raise PreconditionError("check_cut_solution needs a kRouteCut instance")
    removed = sorted(set(removed))
    active = _cut_active(net, removed)
    flow = flow or FlowGraph.of(net)
    counts = [flow.count(d.s, d.t, active) for d in net.requirements()]
    feasible = all(c < d.req for c, d in zip(counts, net.requirements()))
    return feasible, net.edge_cost(removed), counts


def check_solution(net: NetworkInstance, edges, flow: FlowGraph | None = None):
    if net.kind == "kRouteCut":
        return check_cut_solution(net, edges, flow)
    return check_design_solution(net, edges, flow)


class _Feasibility:
    """Feasibility of a selection mask, upward closed in the mask for every kind."""

    def __init__(self, net: NetworkInstance, order: list[int]):
        self.net = net
        self.order = order
        self.flow = FlowGraph.of(net)
        self.cut = net.kind == "kRouteCut"
        self.reqs = net.requirements()
        if self.cut:
            self.base = np.ones(len(net.edges), dtype=bool)
        else:
            self.base = np.array([e.cost == 0 for e in net.edges], dtype=bool)
        self.first = 0
        self.checks = 0

    def __call__(self, mask: int) -> bool:
        self.checks += 1
        active = self.base.copy()
        for bit, e in enumerate(self.order):
            if mask >> bit & 1:
                active[e] = not self.cut
        n = len(self.reqs)
        for step in range(n):
            d = self.reqs[(self.first + step) % n]
            c = self.flow.count(d.s, d.t, active)
            ok = c < d.req if self.cut else c >= d.req
            if not ok:
                self.first = (self.first + step) % n
                return False
        return True


@dataclass(frozen=True)
class NetworkOpt:
    edges: tuple[int, ...]
    cost: Fraction
    candidates: int
    feasibility_checks: int


def brute_force_network_opt(net: NetworkInstance, layout: GadgetLayout | None = None, cap: int = DEFAULT_EDGE_CAP) -> NetworkOpt:
    """Exact optimum over subsets of the selectable (finite, positive-cost) edges.

    Candidates are scanned in (cost, mask) order. An infeasible candidate is
    grown greedily to a maximal infeasible set M, and every subset of M is
    discarded: feasibility is upward closed (adding design edges or removing
    more cut edges never hurts), so no subset of M can be feasible. With a
    layout the bits follow the label order, so ties resolve exactly as in
    ``core.brute_force_min_cost``.
    """
    selectable = net.selectable_edges()
    if layout is not None:
        order = layout.ordered_label_edges()
        if sorted(order) != sorted(selectable):
            raise PreconditionError("layout label edges differ from the selectable edge set")
    else:
        order = selectable
    nbits = len(order)
    if nbits > cap:
        raise CapExceeded("brute_force_network_opt", 1 << nbits, 1 << cap)
    costs = [net.edges[e].cost * net.edges[e].mult for e in order]
    den = math.lcm(*(c.denominator for c in costs)) if costs else 1
    weights = np.array([int(c * den) for c in costs], dtype=np.int64)
    size = 1 << nbits
    masks = np.arange(size, dtype=np.int64)
    cost = np.zeros(size, dtype=np.int64)
    for bit in range(nbits):
        cost += ((masks >> bit) & 1) * weights[bit]
    if size > 1 and int(cost.max()) >= (1 << (62 - nbits)):
        raise CapExceeded("brute_force_network_opt cost range", int(cost.max()), 1 << (62 - nbits))
    keys = np.sort((cost << nbits) | masks)
    del cost
    ordered = keys & (size - 1)
    del keys
    alive = np.ones(size, dtype=bool)
    feasible = _Feasibility(net, order)
    full = size - 1
    ptr = 0
    while True:
        nxt = np.flatnonzero(alive[ptr:ptr + 4096])
        if len(nxt) == 0:
            rest = np.flatnonzero(alive[ptr:])
            if len(rest) == 0:
                raise AssertionError("no feasible selection: the full edge set must be feasible")
            ptr += int(rest[0])
        else:
            ptr += int(nxt[0])
        mask = int(ordered[ptr])
        if feasible(mask):
            chosen = tuple(sorted(order[b] for b in range(nbits) if mask >> b & 1))
            return NetworkOpt(chosen, net.edge_cost(chosen), ptr + 1, feasible.checks)
        grown = mask
        for bit in range(nbits):
            if not grown >> bit & 1 and not feasible(grown | (1 << bit)):
                grown |= 1 << bit
        alive &= (ordered & (full ^ grown)) != 0
        if grown == full:
            raise AssertionError("full edge set is infeasible")


# --- gap experiments ----------------------------------------------------------


@dataclass(frozen=True)
class GapParams:
    profile: core.InstanceProfile
    gadget: str = "rootedDirected"
    gamma: Fraction = Fraction(1, 2)
    epsilon: Fraction = Fraction(0)
    pipeline: bool = False
    cap: int = DEFAULT_EDGE_CAP


@dataclass(frozen=True)
class GapReport:
    seeds: tuple[int, int]
    yes_digest: str
    no_digest: str
    yes_opt: Fraction
    no_opt: Fraction
    ratio: Fraction
    budget_c: Fraction
    yes_max_fraction: Fraction
    no_max_fraction: Fraction
    no_rounded_covered: int
    no_arcs: int
    params: dict
    checks: dict
    wall_clock: float = field(default=0.0, compare=False)


def _min_cost_side(lc, gadget: str, cap: int):
    from .gadgets import reduce

    ref, ref_cost = core.brute_force_min_cost(lc)
    net, layout = reduce(lc, gadget)
    out = {"min_cost_oracle": ref_cost, "gadget_k": net.k, "gadget_demands": len(net.requirements())}
    if len(net.selectable_edges()) <= cap:
        opt = brute_force_network_opt(net, layout, cap)
        out["network_oracle"] = opt.cost
    return ref, ref_cost, out


def gap_experiment(params: GapParams, seed: int) -> GapReport:
    """Planted yes-instance vs random no-instance through (pipeline,) costs and a gadget."""
    from .io import digest_labelcover
    from .rng import derive_seed
    from .transforms import PipelineParams, max_to_min, round_multi_labeling, run_pipeline, total_budget
    from dataclasses import replace

    start = time.perf_counter()
    yes_seed, no_seed = derive_seed(seed, "gap", "yes"), derive_seed(seed, "gap", "no")
    yes = core.random_instance(replace(params.profile, epsilon=Fraction(0)), yes_seed)
    no = core.random_instance(replace(params.profile, epsilon=Fraction(1)), no_seed)
    if params.pipeline:
        pp = PipelineParams(gamma=params.gamma, epsilon=params.epsilon, seed=seed)
        yes, _ = run_pipeline(yes, pp)
        no, _ = run_pipeline(no, pp)
    yes = max_to_min(yes, params.epsilon)
    no = max_to_min(no, params.epsilon if params.epsilon * len(no.arcs) <= min(no.n_left, no.n_right) else 0)
    _, yes_max = core.brute_force_max(yes)
    _, no_max = core.brute_force_max(no)
    _, yes_cost, yes_info = _min_cost_side(yes, params.gadget, params.cap)
    no_ml, no_cost, no_info = _min_cost_side(no, params.gadget, params.cap)
    rounded = round_multi_labeling(no, no_ml)
    covered = core.covered_count(no, rounded)
    budget = total_budget(yes)
    checks = {
        "yes_opt_le_2C": yes_cost <= 2 * budget,
        "rounded_le_max": covered <= no_max * len(no.arcs),
        "yes_gadget_equal": yes_info.get("network_oracle", yes_cost) == yes_cost,
        "no_gadget_equal": no_info.get("network_oracle", no_cost) == no_cost,
        "gadget_oracle_ran": "network_oracle" in yes_info and "network_oracle" in no_info,
    }
    return GapReport(
        seeds=(yes_seed, no_seed),
        yes_digest=digest_labelcover(yes),
        no_digest=digest_labelcover(no),
        yes_opt=yes_cost,
        no_opt=no_cost,
        ratio=no_cost / yes_cost if yes_cost else Fraction(0),
        budget_c=budget,
        yes_max_fraction=yes_max,
        no_max_fraction=no_max,
        no_rounded_covered=covered,
        no_arcs=len(no.arcs),
        params={
            "gadget": params.gadget,
            "gamma": str(params.gamma),
            "epsilon": str(params.epsilon),
            "pipeline": params.pipeline,
            "Delta_yes": yes.max_degree(),
            "Delta_no": no.max_degree(),
            "k_yes": yes_info["gadget_k"],
            "k_no": no_info["gadget_k"],
            "demands_yes": yes_info["gadget_demands"],
            "demands_no": no_info["gadget_demands"],
        },
        checks=checks,
        wall_clock=time.perf_counter() - start,
    )
