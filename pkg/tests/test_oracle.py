from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lc2conn import core, oracle
from lc2conn.core import InstanceProfile, MultiLabeling
from lc2conn.errors import CapExceeded, DomainError, PreconditionError
from lc2conn.gadgets import INF, Demand, Edge, NetworkInstance, labeling_to_solution, reduce
from lc2conn.oracle import FlowGraph, GapParams
from strategies import k1, k3


def plain(n, pairs, directed=False, mult=None):
    mult = mult or {}
    edges = tuple(Edge(u, v, Fraction(0), mult.get((u, v), 1)) for u, v in pairs)
    return NetworkInstance(directed, "vcSndp", 1, ("plain",) * n, edges, demands=(Demand(0, n - 1, 1),))


def check_paths(cert, net):
    adj = set()
    for e in net.edges:
        adj.add((e.u, e.v))
        if not net.directed:
            adj.add((e.v, e.u))
    inner = []
    for p in cert.witness_paths:
        assert p[0] == cert.s and p[-1] == cert.t
        assert all((a, b) in adj for a, b in zip(p, p[1:]))
        inner += list(p[1:-1])
    assert len(inner) == len(set(inner))
    assert len(cert.witness_paths) == cert.path_count


def test_k4_three_paths():
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    net = plain(4, pairs)
    cert = oracle.opcount(net, 0, 3)
    assert cert.path_count == 3 and cert.menger_ok
    check_paths(cert, net)


def test_path_one():
    assert oracle.opcount(plain(3, [(0, 1), (1, 2)]), 0, 2).path_count == 1


def test_parallel_arcs_two():
    net = plain(2, [(0, 1)], directed=True, mult={(0, 1): 2})
    cert = oracle.opcount(net, 0, 1)
    assert cert.path_count == 2 and cert.direct_edges == 2 and cert.menger_ok
    net = NetworkInstance(True, "vcSndp", 1, ("plain",) * 2, (Edge(0, 1, Fraction(0)),) * 2)
    assert oracle.opcount(net, 0, 1).path_count == 2


def test_same_endpoint_rejected():
    with pytest.raises(PreconditionError):
        oracle.opcount(plain(3, [(0, 1)]), 1, 1)


def test_directed_respects_orientation():
    net = plain(3, [(0, 1), (2, 1)], directed=True)
    assert oracle.opcount(net, 0, 2).path_count == 0


def test_cut_witness_separates():
    net = plain(6, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 5), (1, 4), (4, 5)])
    cert = oracle.opcount(net, 0, 5)
    assert cert.path_count == 2 and cert.menger_ok
    g = nx.Graph([(e.u, e.v) for e in net.edges])
    g.remove_nodes_from(cert.cut_vertices)
    assert not nx.has_path(g, 0, 5)


def random_simple(seed, n, p, directed):
    rng = np.random.default_rng(seed)
    if directed:
        pairs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    else:
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return pairs


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 9), st.floats(0.15, 0.7), st.booleans())
def test_matches_networkx_on_non_adjacent_pairs(seed, n, p, directed):
    pairs = random_simple(seed, n, p, directed)
    s, t = 0, n - 1
    pairs = [(u, v) for u, v in pairs if {u, v} != {s, t}]
    net = plain(n, pairs, directed=directed)
    g = (nx.DiGraph if directed else nx.Graph)()
    g.add_nodes_from(range(n))
    g.add_edges_from(pairs)
    cert = oracle.opcount(net, s, t)
    assert cert.path_count == nx.algorithms.connectivity.local_node_connectivity(g, s, t)
    assert cert.menger_ok
    check_paths(cert, net)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 8), st.integers(1, 3))
def test_direct_edges_add_multiplicity(seed, n, m):
    pairs = [(u, v) for u, v in random_simple(seed, n, 0.4, False) if {u, v} != {0, n - 1}]
    without = oracle.opcount(plain(n, pairs), 0, n - 1).path_count
    with_direct = oracle.opcount(plain(n, pairs + [(0, n - 1)], mult={(0, n - 1): m}), 0, n - 1)
    assert with_direct.path_count == without + m
    assert with_direct.menger_ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 9), st.data())
def test_monotone_under_edge_masks(seed, n, data):
    pairs = random_simple(seed, n, 0.5, False)
    if not pairs:
        return
    net = plain(n, pairs)
    flow = FlowGraph.of(net)
    small = np.array(data.draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs))), dtype=bool)
    extra = np.array(data.draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs))), dtype=bool)
    assert flow.count(0, n - 1, small) <= flow.count(0, n - 1, small | extra)


# --- feasibility checkers -------------------------------------------------------------------


def test_design_full_selection_feasible_empty_infeasible():
    net, layout = reduce(k1((1, 1)), "rootedDirected")
    ok, cost, _ = oracle.check_design_solution(net, net.selectable_edges())
    assert ok and cost == 3
    assert not oracle.check_design_solution(net, [])[0]


def test_design_rejects_infinite_and_unknown_edges():
    net, _ = reduce(k1((1, 1)), "kRouteCut")
    inf_edge = next(i for i, e in enumerate(net.edges) if e.cost == INF)
    with pytest.raises(DomainError):
        oracle.check_cut_solution(net, [inf_edge])
    with pytest.raises(PreconditionError):
        oracle.check_design_solution(net, [])
    dnet, _ = reduce(k1((1, 1)), "vcSndp")
    with pytest.raises(DomainError):
        oracle.check_design_solution(dnet, [len(dnet.edges)])


def test_cut_checker_examples():
    net, layout = reduce(k3((1, 1)), "kRouteCut")
    assert not oracle.check_cut_solution(net, [])[0]
    assert oracle.check_cut_solution(net, net.selectable_edges())[0]
    m = MultiLabeling((frozenset({0}), frozenset({0, 1})), (frozenset({0}), frozenset({0})))
    ok, cost, counts = oracle.check_cut_solution(net, labeling_to_solution(layout, m))
    assert ok and cost == 5 and all(c < net.k for c in counts)


@pytest.mark.parametrize("kind", ["rootedDirected", "rootedUndirected", "vcSndp", "kRouteCut"])
def test_feasible_multilabeling_maps_to_feasible_solution(kind):
    inst = k3((1, 1))
    net, layout = reduce(inst, kind)
    m = MultiLabeling((frozenset({0}), frozenset({0, 1})), (frozenset({0}), frozenset({0})))
    ok, cost, _ = oracle.check_solution(net, labeling_to_solution(layout, m))
    assert ok and cost == core.multi_cost(inst, m)


# --- brute force ---------------------------------------------------------------------------


@pytest.mark.parametrize("kind", ["rootedDirected", "kRouteCut", "rootedUndirected", "vcSndp"])
def test_single_arc_gadgets_cost_two(kind):
    inst = core.instance(1, 1, 2, 2, [(0, 0, (0, 1))], costs=(1, 1))
    net, layout = reduce(inst, kind)
    assert oracle.brute_force_network_opt(net, layout).cost == 2
    assert oracle.brute_force_network_opt(net).cost == 2


@pytest.mark.parametrize("kind", ["rootedDirected", "kRouteCut", "rootedUndirected", "vcSndp"])
def test_k3_gadgets_cost_five(kind):
    net, layout = reduce(k3((1, 1)), kind)
    opt = oracle.brute_force_network_opt(net, layout)
    assert opt.cost == 5
    assert oracle.check_solution(net, opt.edges)[0]


def test_layout_and_raw_enumeration_agree():
    inst = core.instance(2, 1, 2, 2, [(0, 0, (0, 1)), (1, 0, (1, 1))], costs=(2, 3))
    for kind in ("rootedDirected", "kRouteCut"):
        net, layout = reduce(inst, kind)
        assert oracle.brute_force_network_opt(net, layout).cost == oracle.brute_force_network_opt(net).cost


def test_network_cap():
    net, _ = reduce(k3((1, 1)), "rootedDirected")
    with pytest.raises(CapExceeded):
        oracle.brute_force_network_opt(net, cap=4)


# --- gap experiment --------------------------------------------------------------------------


def test_gap_experiment_checks_and_determinism():
    params = GapParams(InstanceProfile(2, 2, 2, 2, 2))
    a = oracle.gap_experiment(params, seed=4)
    b = oracle.gap_experiment(params, seed=4)
    assert a == b
    assert all(a.checks.values()), a.checks
    assert a.yes_opt <= 2 * a.budget_c
    assert a.ratio == a.no_opt / a.yes_opt
    assert a.no_rounded_covered <= a.no_max_fraction * a.no_arcs
