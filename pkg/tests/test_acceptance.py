"""Acceptance criteria 1-10, each at its stated tolerance; one PASS/FAIL line per criterion."""

import contextlib
import io as stdio
import json
import math
import time
from collections import Counter
from fractions import Fraction

import numpy as np

from lc2conn import core, matching, oracle, spectral, transforms
from lc2conn.cli import main
from lc2conn.core import InstanceProfile, Labeling, MultiLabeling
from lc2conn.errors import ExpanderError
from lc2conn.gadgets import labeling_to_solution, merge_demands, reduce, to_directed_rooted, to_kroute_cut, to_vc_sndp
from lc2conn.rng import stream
from strategies import biregular, circulant_regular, random_costed, random_bipartite

KINDS = ["rootedDirected", "rootedUndirected", "vcSndp", "kRouteCut"]


def test_criterion_1_gadget_opt_equivalence(acceptance):
    start = time.perf_counter()
    n_inst, mismatches, max_bits = 60, [], 0
    for seed in range(n_inst):
        lc = random_costed(seed, max_side=3, max_labels=3)
        ref = core.brute_force_min_cost(lc)[1]
        for kind in KINDS:
            net, layout = reduce(lc, kind)
            bits = len(net.selectable_edges())
            max_bits = max(max_bits, bits)
            assert bits <= 24
            got = oracle.brute_force_network_opt(net, layout).cost
            if got != ref:
                mismatches.append((seed, kind, got, ref))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed <= 600
    acceptance.record(1, "gadget OPT = min-cost label cover", ok,
                      f"{n_inst} instances x 4 gadgets, {len(mismatches)} mismatches, max {max_bits} finite edges, {elapsed:.1f}s")
    assert ok, mismatches[:5]


def test_criterion_2_parameter_formulas(acceptance):
    violations = []
    for seed in range(200):
        lc = random_costed(10_000 + seed, max_side=4, max_labels=3)
        delta = lc.max_degree()
        coloring = matching.strong_edge_color(lc)
        net, layout = to_directed_rooted(lc)
        if net.k != delta:
            violations.append((seed, "directed k", net.k, delta))
        for kind in ("rootedDirected", "kRouteCut"):
            base, base_layout = reduce(lc, kind)
            merged = merge_demands(base, base_layout, coloring)
            if merged.merged_demand_count > 2 * delta * delta:
                violations.append((seed, f"{kind} merged", merged.merged_demand_count, 2 * delta * delta))
        net, _ = to_vc_sndp(lc)
        bound = 2 * delta * lc.max_labels + 4 * delta * delta + 1
        if net.k > bound:
            violations.append((seed, "sndp k", net.k, bound))
        net, layout = to_kroute_cut(lc)
        z = max(len(p["Z"]) for p in layout.padding.values())
        if net.k != z + 1:
            violations.append((seed, "kroute k", net.k, z + 1))
    ok = not violations
    acceptance.record(2, "parameter formulas", ok, f"200 instances, {len(violations)} violations")
    assert ok, violations[:5]


def test_criterion_3_right_degree_reduction(acceptance):
    violations = 0
    for seed in range(100):
        rng = stream(seed, "acceptance", 3)
        nw = int(rng.integers(1, 7))
        prof = InstanceProfile(int(rng.integers(1, 7)), nw, int(rng.integers(1, 4)), int(rng.integers(1, 4)),
                               int(rng.integers(1, nw + 1)), Fraction(int(rng.integers(0, 5)), 4))
        inst = core.random_instance(prof, seed)
        d = int(rng.integers(1, 7))
        out, trace = transforms.right_degree_reduce(inst, d, seed)
        ok = set(out.right_degrees()) == {d} and set(out.left_degrees()) == {d * prof.degree}
        lab = Labeling(tuple(int(x) for x in rng.integers(prof.n_labels_left, size=prof.n_left)),
                       tuple(int(x) for x in rng.integers(prof.n_labels_right, size=prof.n_right)))
        for candidate in (lab, inst.planted):
            ok &= core.coverage_fraction(out, trace.lift_labeling(candidate)) == core.coverage_fraction(inst, candidate)
        lifted = Counter((a.u, trace.right_source[a.w], a.proj) for a in out.arcs)
        ok &= lifted == Counter({k: d * v for k, v in core.arc_multiset(inst).items()})
        ok &= Counter(trace.arc_source) == Counter({i: d for i in range(len(inst.arcs))})
        violations += not ok
    acceptance.record(3, "right-degree reduction", violations == 0, f"100 instances, {violations} violations")
    assert violations == 0


def test_criterion_4_regularization_invariance(acceptance):
    mismatches, checked = 0, 0
    for seed in range(50):
        rng = stream(seed, "acceptance", 4)
        nu, big_d = int(rng.integers(1, 4)), int(rng.integers(1, 3))
        d2 = int(rng.integers(1, nu + 1))
        l1, l2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        inst = biregular(seed, nu, big_d, d2, l1, l2)
        out, _ = transforms.regularize(inst)
        mismatches += core.brute_force_max(out)[1] != core.brute_force_max(inst)[1]
        checked += 1
    acceptance.record(4, "regularization keeps the optimum", mismatches == 0, f"{checked} instances, {mismatches} mismatches")
    assert mismatches == 0


def test_criterion_5_sparsification_statistics(acceptance):
    start = time.perf_counter()
    gamma = Fraction(1, 4)
    seeds = 200
    within, trim_bad = 0, 0
    inst = circulant_regular(64, 16, 4, seed=0)
    m = len(inst.arcs)
    assert m == 1024 and inst.max_degree() == 16
    rho = transforms.sparsify_rate(gamma, 4, 16)
    sigma = math.sqrt(rho * (1 - rho) * m)
    threshold = transforms.trim_threshold(gamma, 4)
    for seed in range(seeds):
        out, _ = transforms.sparsify(inst, gamma, seed)
        within += abs(len(out.arcs) - rho * m) <= 3 * sigma
        trimmed, _ = transforms.trim_large_degree(out, threshold, seed)
        trim_bad += trimmed.max_degree() > 2 / gamma * math.log(4)
    elapsed = time.perf_counter() - start
    ok = within >= 0.99 * seeds and trim_bad == 0 and elapsed <= 120
    acceptance.record(5, "sparsification statistics", ok,
                      f"{within}/{seeds} within 3 sigma of rho|E| = {rho * m:.1f}, {trim_bad} trim violations, {elapsed:.1f}s")
    assert ok


def test_criterion_6_expander_certificates(acceptance):
    rows, all_ok = [], True
    for n in (24, 50, 100):
        for d in (4, 6):
            success, reverified = 0, 0
            for seed in range(100):
                try:
                    g, cert, attempts = spectral.build_expander(n, d, c=3, seed=seed, max_retries=32)
                except ExpanderError:
                    continue
                success += 1
                again = spectral.second_eigenvalue(g, bound_c=3)
                dense = spectral.second_eigenvalue(g, method="dense", bound_c=3)
                reverified += again.passed and dense.passed and set(g.degrees().tolist()) == {d}
            rows.append(f"n={n} d={d}: {success}/100")
            all_ok &= success >= 95 and reverified == success
    acceptance.record(6, "expander certificates", all_ok, ", ".join(rows))
    assert all_ok


def test_criterion_7_strong_coloring(acceptance):
    violations = 0
    for seed in range(200):
        g = random_bipartite(seed, max_side=8)
        c = matching.strong_edge_color(g)
        delta = matching.max_degree(g)
        violations += not all(matching.is_induced_matching(g, cls) for cls in c.classes())
        violations += c.color_count > max(1, 2 * delta * delta)
    path = [(0, 0), (1, 0), (1, 1)]
    greedy = matching.strong_edge_color(path).color_count
    exhaustive = matching.minimum_strong_coloring(path).color_count
    ok = violations == 0 and greedy == exhaustive == 3
    acceptance.record(7, "strong coloring", ok, f"200 graphs, {violations} violations; P3 greedy {greedy}, exhaustive {exhaustive}")
    assert ok


def test_criterion_8_kroute_flow_claims(acceptance):
    bad = Counter()
    for seed in range(20):
        lc = random_costed(20_000 + seed)
        net, layout = to_kroute_cut(lc)
        flow = oracle.FlowGraph.of(net)
        for e, dem in enumerate(net.demands):
            cert = flow.certificate(dem.s, dem.t)
            bad["menger"] += not cert.menger_ok
            bad["intact"] += not net.k <= cert.path_count <= net.k + 1
            gone = set(layout.padding[e]["Z"]) | set(layout.padding[e]["S"])
            active = np.array([not ({x.u, x.v} & gone) for x in net.edges])
            bad["after_ZS"] += flow.count(dem.s, dem.t, active) != 2
        m, _ = core.brute_force_min_cost(lc)
        _, _, counts = oracle.check_cut_solution(net, labeling_to_solution(layout, m), flow)
        bad["labeling_cut"] += sum(c >= net.k for c in counts)
        survived = False
        for e, arc in enumerate(lc.arcs):
            for b in range(lc.n_labels_right):
                removed = [layout.label_edge[("R", arc.w, b)]]
                removed += [layout.label_edge[("L", arc.u, a)] for a in range(lc.n_labels_left) if arc.proj[a] != b]
                _, _, counts = oracle.check_cut_solution(net, removed, flow)
                survived |= counts[e] >= net.k
                bad["zigzag"] += counts[e] < net.k
        bad["no_witness"] += not survived
    ok = sum(bad.values()) == 0
    acceptance.record(8, "k-route flow claims", ok, "20 gadgets, violations " + json.dumps(dict(sorted(bad.items()))))
    assert ok


def test_criterion_9_rounding_bound(acceptance):
    violations = 0
    for seed in range(100):
        inst = random_costed(30_000 + seed, max_side=5, max_labels=4)
        rng = stream(seed, "acceptance", 9)
        left = tuple(frozenset(np.flatnonzero(rng.random(inst.n_labels_left) < 0.5).tolist()) for _ in range(inst.n_left))
        right = tuple(frozenset(np.flatnonzero(rng.random(inst.n_labels_right) < 0.5).tolist()) for _ in range(inst.n_right))
        m = MultiLabeling(left, right)
        out = transforms.round_multi_labeling(inst, m)
        violations += core.covered_count(inst, out) < transforms.expected_covered(inst, m)
    acceptance.record(9, "rounding beats the expectation", violations == 0, f"100 pairs, {violations} violations")
    assert violations == 0


def _cli_matrix(tmp):
    lc = tmp / "a.lc"
    costed = tmp / "c.lc"
    matrix = [
        ["gen", "--left", "4", "--right", "4", "--labels", "2", "2", "--degree", "2", "--eps", "1/4", "--seed", "7", "--out", lc],
        ["gen", "--left", "3", "--right", "5", "--labels", "3", "2", "--degree", "3", "--seed", "9", "--out", tmp / "b.lc"],
        ["transform", "rightdeg", "--d", "3", "--seed", "5", lc, tmp / "rd.lc"],
        ["transform", "regularize", tmp / "rd.lc", tmp / "reg.lc"],
        ["transform", "sparsify", "--gamma", "1/2", "--seed", "5", tmp / "reg.lc", tmp / "sp.lc"],
        ["transform", "trim", "--gamma", "1/2", tmp / "sp.lc", tmp / "tr.lc"],
        ["transform", "pipeline", "--gamma", "1/2", "--eps", "1/8", "--seed", "3", lc, tmp / "pl.lc"],
        ["costs", lc, costed],
        ["color", costed, tmp / "col.txt"],
    ]
    for gadget in ("rootedDirected", "rootedUndirected", "sndp", "kroute"):
        net = tmp / f"{gadget}.nw"
        matrix.append(["reduce", gadget, costed, net])
        matrix.append(["verify", "--claims", net])
        matrix.append(["bruteforce", net])
    for gadget in ("rootedDirected", "kroute"):
        matrix.append(["merge", tmp / f"{gadget}.nw", tmp / f"{gadget}.merged.nw"])
    matrix.append(["bruteforce", costed])
    matrix.append(["gap", "--left", "2", "--right", "2", "--labels", "2", "2", "--degree", "2", "--seed", "4"])
    return matrix


def _run_matrix(tmp):
    tmp.mkdir()
    results = []
    for i, argv in enumerate(_cli_matrix(tmp)):
        rep = tmp / f"report{i}.json"
        buf = stdio.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main([str(a) for a in argv] + ["--report", str(rep)])
        data = json.loads(rep.read_text())
        rel = {
            "digests": {
                side: {str(k).replace(str(tmp), "<tmp>"): v for k, v in d.items()} for side, d in data["digests"].items()
            },
            "values": data["values"],
            "checks": data["checks"],
        }
        results.append((argv[0], code, rel, buf.getvalue()))
    return results


def test_criterion_10_cli_determinism(acceptance, tmp_path):
    first = _run_matrix(tmp_path / "run1")
    second = _run_matrix(tmp_path / "run2")
    diffs = [a[0] for a, b in zip(first, second) if a[1:] != b[1:]]
    codes = sorted({(name, code) for name, code, _, _ in first})
    ok = not diffs and all(code == 0 for _, code, _, _ in first)
    acceptance.record(10, "CLI determinism", ok, f"{len(first)} commands x 2 runs, {len(diffs)} digest mismatches, exit codes {codes}")
    assert ok, diffs
