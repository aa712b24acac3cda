"""Command-line workbench: ``lc2conn <command> ...``.

Exit codes: 0 ok, 1 failed verdict, 2 usage or input error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, claims, core, io, oracle, transforms
from .errors import CapExceeded, ConfigurationError, DomainError, InfeasibleProfile, MergeError, PipelineError, PreconditionError
from .gadgets import merge_demands, reduce
from .matching import max_degree, strong_edge_color

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

GADGET_ALIASES = {
    "rootedDirected": "rootedDirected",
    "rootedUndirected": "rootedUndirected",
    "sndp": "vcSndp",
    "vcSndp": "vcSndp",
    "kroute": "kRouteCut",
    "kRouteCut": "kRouteCut",
}


class Report:
    """Accumulates a RunReport; ``digests`` and ``checks`` are the replayable part."""

    def __init__(self, argv):
        self.data = {
            "tool_version": __version__,
            "command": list(argv),
            "seeds": {},
            "digests": {"inputs": {}, "outputs": {}},
            "traces": [],
            "checks": [],
            "values": {},
            "wall_clock": {},
        }
        self._t0 = time.perf_counter()

    def input(self, path, text):
        self.data["digests"]["inputs"][str(path)] = io.digest_text(text)

    def output(self, name, text):
        self.data["digests"]["outputs"][str(name)] = io.digest_text(text)

    def check(self, c: claims.Check):
        self.data["checks"].append(c.as_dict())

    def value(self, key, val, formula=None):
        entry = {"value": _jsonable(val)}
        if formula is not None:
            entry["formula"] = formula
        self.data["values"][key] = entry

    def stage(self, name, seconds):
        self.data["wall_clock"][name] = round(seconds, 6)

    def dump(self, path):
        self.data["wall_clock"]["total"] = round(time.perf_counter() - self._t0, 6)
        text = json.dumps(self.data, sort_keys=True, indent=2, default=_jsonable) + "\n"
        if path:
            Path(path).write_text(text)
        return text


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if hasattr(x, "item"):
        return x.item()
    return x


def _read(path, report: Report) -> str:
    text = Path(path).read_text()
    report.input(path, text)
    return text


def _write(path, text: str, report: Report, name=None):
    report.output(name or path or "stdout", text)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_lc(path, report):
    return io.read_labelcover(_read(path, report))


def _load_net(path, report):
    return io.read_network(_read(path, report))


def _frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad rational {s!r}") from exc


def _d_arg(s: str):
    return None if s == "auto" else int(s)


# --- commands ---------------------------------------------------------------


def cmd_gen(a, rep: Report) -> int:
    prof = core.InstanceProfile(a.left, a.right, a.labels[0], a.labels[1], a.degree, a.eps)
    rep.data["seeds"]["gen"] = a.seed
    inst = core.random_instance(prof, a.seed)
    _write(a.out, io.write_labelcover(inst), rep)
    rep.value("planted_coverage", core.coverage_fraction(inst, inst.planted), ">= 1 - eps")
    return EXIT_OK


def cmd_transform(a, rep: Report) -> int:
    inst = _load_lc(a.input, rep)
    t0 = time.perf_counter()
    if a.pass_name == "rightdeg":
        d = a.d if a.d is not None else 2
        out, trace = transforms.right_degree_reduce(inst, d, a.seed)
        traces = [trace]
        rep.value("arc_multiplier", trace.arc_multiplier, "d")
    elif a.pass_name == "regularize":
        out, trace = transforms.regularize(inst)
        traces = [trace]
    elif a.pass_name == "sparsify":
        out, trace = transforms.sparsify(inst, a.gamma, a.seed)
        traces = [trace]
        rep.value("rho", trace.params["rho"], "gamma^-1 ln(maxL) / Delta")
        rep.value("skipped", any("skipped" in n for n in trace.notes))
    elif a.pass_name == "trim":
        thr = float(a.threshold) if a.threshold is not None else transforms.trim_threshold(a.gamma, inst.max_labels)
        out, trace = transforms.trim_large_degree(inst, thr, a.seed)
        traces = [trace]
        rep.value("threshold", thr, "2 gamma^-1 ln(maxL)")
    else:  # pipeline
        if a.config:
            params = io.read_pipeline(_read(a.config, rep))
        else:
            params = transforms.PipelineParams(gamma=a.gamma, epsilon=a.eps, d=a.d, trim=a.threshold, seed=a.seed)
        out, traces = transforms.run_pipeline(inst, params)
        thr = float(params.trim) if params.trim is not None else transforms.trim_threshold(params.gamma, out.max_labels)
        delta = out.max_degree()
        rep.value("Delta_out", delta)
        rep.value("trim_threshold", thr, "2 gamma^-1 ln(maxL)")
        rep.check(claims.Check("Delta(out) <= threshold", delta <= thr, str(delta), f"2 gamma^-1 ln(maxL) = {thr:.6f}"))
        rep.data["seeds"]["pipeline"] = params.seed
    rep.stage(a.pass_name, time.perf_counter() - t0)
    rep.data["seeds"].setdefault(a.pass_name, a.seed)
    rep.data["traces"] = [t.summary() for t in traces]
    _write(a.output, io.write_labelcover(out), rep)
    return EXIT_OK if all(c["pass"] for c in rep.data["checks"]) else EXIT_FAIL


def cmd_costs(a, rep: Report) -> int:
    inst = _load_lc(a.input, rep)
    out = transforms.max_to_min(inst, a.eps)
    rep.value("c1", out.cost_left, "|W|")
    rep.value("c2", out.cost_right, "|U|")
    rep.value("C", transforms.total_budget(out), "c1|U| + c2|W| = 2|U||W|")
    _write(a.output, io.write_labelcover(out), rep)
    return EXIT_OK


def cmd_reduce(a, rep: Report) -> int:
    inst = _load_lc(a.input, rep)
    kind = GADGET_ALIASES[a.gadget]
    t0 = time.perf_counter()
    net, layout = reduce(inst, kind)
    rep.stage("reduce", time.perf_counter() - t0)
    delta = inst.max_degree()
    rep.value("k", net.k)
    rep.value("Delta", delta)
    rep.value("demands", len(net.requirements()))
    if kind == "rootedDirected":
        rep.check(claims.Check("k = Delta", net.k == delta, str(net.k), f"Delta = {delta}"))
    elif kind == "kRouteCut":
        z = max((len(p["Z"]) for p in layout.padding.values()), default=0)
        rep.value("z", z, "max |Z_ij|")
        rep.check(claims.Check("k = z+1", net.k == z + 1, str(net.k), f"z+1 = {z + 1}"))
    elif kind == "vcSndp":
        bound = 2 * delta * inst.max_labels + 4 * delta * delta + 1
        rep.check(claims.Check("k <= 2 Delta maxL + 4 Delta^2 + 1", net.k <= bound, str(net.k), str(bound)))
    _write(a.output, io.write_network(net, layout), rep)
    return EXIT_OK if all(c["pass"] for c in rep.data["checks"]) else EXIT_FAIL


def cmd_merge(a, rep: Report) -> int:
    net, layout = _load_net(a.input, rep)
    if layout is None:
        raise ConfigurationError("merge needs a network file with layout lines")
    coloring = strong_edge_color(list(layout.demand_arcs))
    merged = merge_demands(net, layout, coloring)
    delta = max_degree(layout.demand_arcs)
    count = merged.merged_demand_count
    rep.value("merged_demands", count)
    rep.value("k_new", merged.k_new, "k * max_C |T_C|" if net.kind == "rootedDirected" else "k")
    rep.check(claims.Check("merged_demands <= 2 Delta^2", count <= max(1, 2 * delta * delta), str(count), f"2*Delta^2 = {2 * delta * delta}"))
    _write(a.output, io.write_network(merged.merged, merged.layout), rep)
    return EXIT_OK if all(c["pass"] for c in rep.data["checks"]) else EXIT_FAIL


def cmd_color(a, rep: Report) -> int:
    inst = _load_lc(a.input, rep)
    coloring = strong_edge_color(inst)
    delta = inst.max_degree()
    rep.value("colors", coloring.color_count)
    rep.check(claims.Check("colors <= 2 Delta^2", coloring.color_count <= max(1, 2 * delta * delta), str(coloring.color_count), f"2*Delta^2 = {2 * delta * delta}"))
    _write(a.output, io.write_coloring(coloring), rep)
    return EXIT_OK


def cmd_verify(a, rep: Report) -> int:
    net, layout = _load_net(a.network, rep)
    ok = True
    if a.solution:
        sol = io.read_solution(_read(a.solution, rep))
        feasible, cost, counts = oracle.check_solution(net, sol)
        reqs = net.requirements()
        lines = [f"demand {i} ({d.s},{d.t}) paths {c} req {d.req}" for i, (d, c) in enumerate(zip(reqs, counts))]
        verdict = "FEASIBLE" if feasible else "INFEASIBLE"
        print(f"{verdict} cost {cost}")
        print("\n".join(lines))
        rep.value("feasible", feasible)
        rep.value("cost", cost)
        rep.value("path_counts", counts)
        ok = feasible
    if a.claims:
        checks = claims.claims(net, layout)
        for c in checks:
            rep.check(c)
        print(claims.fmt_table(checks))
        ok = ok and claims.all_pass(checks)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bruteforce(a, rep: Report) -> int:
    text = _read(a.input, rep)
    if text.lstrip().startswith("network"):
        net, layout = io.read_network(text)
        opt = oracle.brute_force_network_opt(net, layout, a.cap if a.cap is not None else oracle.DEFAULT_EDGE_CAP)
        rep.value("opt_cost", opt.cost)
        rep.value("opt_edges", list(opt.edges))
        print(f"opt cost {opt.cost}")
        print("edges " + " ".join(map(str, opt.edges)))
        return EXIT_OK
    inst = io.read_labelcover(text)
    cap = 1 << (a.cap if a.cap is not None else 22)
    lab, frac = core.brute_force_max(inst, cap)
    rep.value("max_fraction", frac)
    print(f"max fraction {frac}")
    print("left " + " ".join(map(str, lab.left)))
    print("right " + " ".join(map(str, lab.right)))
    if inst.has_costs:
        m, cost = core.brute_force_min_cost(inst, cap)
        rep.value("min_cost", cost)
        print(f"min cost {cost}")
    return EXIT_OK


def cmd_gap(a, rep: Report) -> int:
    prof = core.InstanceProfile(a.left, a.right, a.labels[0], a.labels[1], a.degree)
    params = oracle.GapParams(prof, GADGET_ALIASES[a.gadget], a.gamma, a.eps, a.pipeline)
    rep.data["seeds"]["gap"] = a.seed
    g = oracle.gap_experiment(params, a.seed)
    rep.stage("gap", g.wall_clock)
    for key in ("yes_opt", "no_opt", "ratio", "budget_c", "yes_max_fraction", "no_max_fraction", "no_rounded_covered", "no_arcs"):
        rep.value(key, getattr(g, key))
    rep.value("params", g.params)
    rep.output("yes_instance", g.yes_digest)
    rep.output("no_instance", g.no_digest)
    for name, passed in g.checks.items():
        rep.check(claims.Check(name, bool(passed)))
    print(f"yesOPT {g.yes_opt} noOPT {g.no_opt} ratio {g.ratio} C {g.budget_c}")
    return EXIT_OK if all(g.checks.values()) else EXIT_FAIL


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lc2conn", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--report", help="write the JSON run report here")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    def profile(sp):
        sp.add_argument("--left", type=int, required=True)
        sp.add_argument("--right", type=int, required=True)
        sp.add_argument("--labels", type=int, nargs=2, required=True, metavar=("L1", "L2"))
        sp.add_argument("--degree", type=int, required=True)

    g = sub.add_parser("gen", help="random planted label-cover instance")
    profile(g)
    g.add_argument("--eps", type=_frac, default=Fraction(0))
    g.add_argument("--out")
    common(g)

    t = sub.add_parser("transform", help="run one shaping pass or the whole pipeline")
    t.add_argument("pass_name", choices=["rightdeg", "regularize", "sparsify", "trim", "pipeline"])
    t.add_argument("input")
    t.add_argument("output", nargs="?")
    t.add_argument("--out", dest="out_flag")
    t.add_argument("--d", type=_d_arg, default=None)
    t.add_argument("--gamma", type=_frac, default=Fraction(1, 2))
    t.add_argument("--eps", type=_frac, default=Fraction(0))
    t.add_argument("--threshold", type=_frac, default=None)
    t.add_argument("--config", help="pipeline v1 file (overrides the flags)")
    common(t)

    c = sub.add_parser("costs", help="attach max-to-min label costs")
    c.add_argument("input")
    c.add_argument("output", nargs="?")
    c.add_argument("--out", dest="out_flag")
    c.add_argument("--eps", type=_frac, default=Fraction(0))
    common(c, seed=False)

    r = sub.add_parser("reduce", help="emit a connectivity gadget")
    r.add_argument("gadget", choices=sorted(GADGET_ALIASES))
    r.add_argument("input")
    r.add_argument("output", nargs="?")
    r.add_argument("--out", dest="out_flag")
    common(r, seed=False)

    m = sub.add_parser("merge", help="merge demands by strong edge coloring")
    m.add_argument("input")
    m.add_argument("output", nargs="?")
    m.add_argument("--out", dest="out_flag")
    common(m, seed=False)

    co = sub.add_parser("color", help="greedy strong edge coloring of a label-cover graph")
    co.add_argument("input")
    co.add_argument("output", nargs="?")
    co.add_argument("--out", dest="out_flag")
    common(co, seed=False)

    v = sub.add_parser("verify", help="check a solution and/or the structural claims")
    v.add_argument("network")
    v.add_argument("solution", nargs="?")
    v.add_argument("--claims", action="store_true")
    common(v, seed=False)

    b = sub.add_parser("bruteforce", help="exact optimum of a label-cover or network file")
    b.add_argument("input")
    b.add_argument("--cap", type=int, default=None, help="log2 of the enumeration cap")
    common(b, seed=False)

    gp = sub.add_parser("gap", help="planted yes vs random no gap experiment")
    profile(gp)
    gp.add_argument("--gadget", choices=sorted(GADGET_ALIASES), default="rootedDirected")
    gp.add_argument("--gamma", type=_frac, default=Fraction(1, 2))
    gp.add_argument("--eps", type=_frac, default=Fraction(0))
    gp.add_argument("--pipeline", action="store_true")
    common(gp)
    return p


COMMANDS = {
    "gen": cmd_gen,
    "transform": cmd_transform,
    "costs": cmd_costs,
    "reduce": cmd_reduce,
    "merge": cmd_merge,
    "color": cmd_color,
    "verify": cmd_verify,
    "bruteforce": cmd_bruteforce,
    "gap": cmd_gap,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(a, "out_flag", None) and not getattr(a, "output", None):
        a.output = a.out_flag
    rep = Report(["lc2conn", *argv])
    try:
        code = COMMANDS[a.command](a, rep)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except PipelineError as exc:
        print(f"error: pipeline: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (InfeasibleProfile, PreconditionError, ConfigurationError, DomainError, MergeError, io.FormatError, OSError) as exc:
        where = f"{a.command} {a.pass_name}" if a.command == "transform" else a.command
        print(f"error: {where}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep.dump(getattr(a, "report", None))
    return code


if __name__ == "__main__":
    sys.exit(main())
