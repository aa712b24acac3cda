"""Instance-shaping passes: right-degree reduction, regularization,
sparsification, large-degree trimming, and the max-to-min cost conversion.

Every pass returns the new instance together with a :class:`PassTrace`
recording where each output arc and vertex came from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import spectral
from .core import (
    Arc,
    DegreeProfile,
    LabelCoverInstance,
    Labeling,
    MultiLabeling,
    degree_profile,
)
from .errors import ExpanderError, PipelineError, PreconditionError
from .rng import derive_seed, stream


@dataclass(frozen=True)
class PassTrace:
    pass_name: str
    input_profile: DegreeProfile
    output_profile: DegreeProfile
    arc_source: tuple[int, ...]
    left_source: tuple[int, ...]
    right_source: tuple[int, ...]
    arc_multiplier: Fraction = Fraction(1)
    params: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    seed: int | None = None

    def compose(self, later: PassTrace) -> PassTrace:
        """Trace of running ``self`` then ``later``; provenance maps compose."""
        return PassTrace(
            pass_name=f"{self.pass_name}+{later.pass_name}",
            input_profile=self.input_profile,
            output_profile=later.output_profile,
            arc_source=tuple(self.arc_source[i] for i in later.arc_source),
            left_source=tuple(self.left_source[i] for i in later.left_source),
            right_source=tuple(self.right_source[i] for i in later.right_source),
            arc_multiplier=self.arc_multiplier * later.arc_multiplier,
            params={**self.params, **later.params},
            notes=self.notes + later.notes,
            seed=later.seed if later.seed is not None else self.seed,
        )

    def lift_labeling(self, lab: Labeling) -> Labeling:
        """Copy each source vertex's label onto all of its output copies."""
        return Labeling(
            tuple(lab.left[s] for s in self.left_source),
            tuple(lab.right[s] for s in self.right_source),
        )

    def summary(self) -> dict:
        return {
            "pass": self.pass_name,
            "arcs_out": len(self.arc_source),
            "arc_multiplier": str(self.arc_multiplier),
            "params": {k: str(v) for k, v in self.params.items()},
            "notes": list(self.notes),
            "seed": self.seed,
            "input_profile": self.input_profile.as_dict(),
            "output_profile": self.output_profile.as_dict(),
        }


def _trace(name, src, out, arc_source, left_source, right_source, **kw) -> PassTrace:
    mult = Fraction(len(out.arcs), len(src.arcs)) if src.arcs else Fraction(1)
    return PassTrace(
        name,
        degree_profile(src),
        degree_profile(out),
        tuple(arc_source),
        tuple(left_source),
        tuple(right_source),
        arc_multiplier=mult,
        **kw,
    )


def identity_trace(name: str, inst: LabelCoverInstance, **kw) -> PassTrace:
    return _trace(
        name, inst, inst, range(len(inst.arcs)), range(inst.n_left), range(inst.n_right), **kw
    )


# --- right-degree reduction -------------------------------------------------


def mixing_matrix(n: int, d: int, c: float, seed: int) -> tuple[np.ndarray, str]:
    """n x n nonnegative integer matrix with every row and column summing to d.

    Uses a certified expander when one exists on n vertices, otherwise the
    complete multigraph with uniform multiplicity q = d // n plus a circulant
    for the remaining d mod n.
    """
    if n >= d and (n * d) % 2 == 0 and n > 1:
        try:
            g, cert, attempts = spectral.build_expander(n, d, c, seed)
            return g.adjacency(), f"expander(lambda2={cert.lambda2:.4f}, attempts={attempts})"
        except ExpanderError:
            pass
    q, r = divmod(d, n)
    m = np.full((n, n), q, dtype=np.int64)
    for i in range(n):
        for k in range(r):
            m[i, (i + k) % n] += 1
    return m, "complete"


def right_degree_reduce(inst: LabelCoverInstance, d: int, seed: int, c: float = 3.0):
    if d < 1:
        raise PreconditionError("d must be at least 1")
    ldeg = inst.left_degrees()
    if len(set(ldeg)) > 1:
        raise PreconditionError(f"input is not left-regular (left degrees {sorted(set(ldeg))})")
    by_w: list[list[int]] = [[] for _ in range(inst.n_right)]
    for idx, arc in enumerate(inst.arcs):
        by_w[arc.w].append(idx)

    arcs, arc_src, right_src, notes = [], [], [], []
    for w, incident in enumerate(by_w):
        n = len(incident)
        if n == 0:
            continue
        base = len(right_src)
        right_src.extend([w] * n)
        m, kind = mixing_matrix(n, d, c, derive_seed(seed, "right_degree_reduce", w))
        if kind == "complete":
            notes.append(f"w{w}: deg {n} uses complete-multigraph fallback")
        for i in range(n):
            src = inst.arcs[incident[i]]
            for j in range(n):
                for _ in range(int(m[i, j])):
                    arcs.append(Arc(src.u, base + j, src.proj))
                    arc_src.append(incident[i])
    out = replace(
        inst, n_right=len(right_src), arcs=tuple(arcs), multi_arc=True, planted=None
    )
    if inst.planted is not None:
        out = replace(out, planted=Labeling(inst.planted.left, tuple(inst.planted.right[s] for s in right_src)))
    trace = _trace(
        "rightdeg", inst, out, arc_src, range(inst.n_left), right_src,
        params={"d": d, "c": c}, notes=tuple(notes), seed=seed,
    )
    return out, trace


# --- regularization -----------------------------------------------------------


def regularize(inst: LabelCoverInstance):
    ld, rd = inst.left_degrees(), inst.right_degrees()
    if not ld or not rd or len(set(ld)) != 1 or len(set(rd)) != 1:
        raise PreconditionError("input is not biregular")
    d1, d2 = ld[0], rd[0]
    if d2 == 0 or d1 % d2:
        raise PreconditionError(f"left degree {d1} is not an integer multiple of right degree {d2}")
    big_d = d1 // d2
    arcs, arc_src = [], []
    for idx, arc in enumerate(inst.arcs):
        for c in range(big_d):
            arcs.append(Arc(arc.u * big_d + c, arc.w, arc.proj))
            arc_src.append(idx)
    left_src = [u for u in range(inst.n_left) for _ in range(big_d)]
    out = replace(
        inst,
        n_left=inst.n_left * big_d,
        arcs=tuple(arcs),
        multi_arc=inst.multi_arc or big_d > 1,
        planted=None,
    )
    if inst.planted is not None:
        out = replace(out, planted=Labeling(tuple(inst.planted.left[s] for s in left_src), inst.planted.right))
    return out, _trace("regularize", inst, out, arc_src, left_src, range(inst.n_right), params={"D": big_d})


# --- sparsification and trimming ----------------------------------------------


def sparsify_rate(gamma: Fraction, max_labels: int, max_degree: int) -> float:
    if max_degree == 0:
        return math.inf
    return float(1 / Fraction(gamma)) * math.log(max_labels) / max_degree


def trim_threshold(gamma: Fraction, max_labels: int) -> float:
    return 2 * float(1 / Fraction(gamma)) * math.log(max_labels)


def _subinstance(inst: LabelCoverInstance, keep_arcs, keep_left, keep_right):
    lmap = {u: i for i, u in enumerate(keep_left)}
    rmap = {w: i for i, w in enumerate(keep_right)}
    arcs = tuple(
        Arc(lmap[inst.arcs[i].u], rmap[inst.arcs[i].w], inst.arcs[i].proj) for i in keep_arcs
    )
    out = replace(inst, n_left=len(keep_left), n_right=len(keep_right), arcs=arcs, planted=None)
    if inst.planted is not None:
        out = replace(
            out,
            planted=Labeling(
                tuple(inst.planted.left[u] for u in keep_left),
                tuple(inst.planted.right[w] for w in keep_right),
            ),
        )
    return out


def sparsify(inst: LabelCoverInstance, gamma, seed: int):
    """Keep every arc independently with probability rho = ln(maxL) / (gamma * Delta)."""
    gamma = Fraction(gamma)
    prof = degree_profile(inst)
    if prof.min_left != prof.max_left or prof.min_right != prof.max_right or prof.max_left != prof.max_right:
        raise PreconditionError("sparsify expects a Delta-regular instance")
    rho = sparsify_rate(gamma, inst.max_labels, prof.max_degree)
    params = {"gamma": gamma, "rho": rho, "Delta": prof.max_degree}
    if rho > 1:
        return inst, identity_trace(
            "sparsify", inst, params=params, notes=(f"skipped: rho={rho:.6f} > 1",), seed=seed
        )
    draws = stream(seed, "sparsify").random(len(inst.arcs))
    keep = [i for i in range(len(inst.arcs)) if draws[i] < rho]
    out = _subinstance(inst, keep, range(inst.n_left), range(inst.n_right))
    return out, _trace("sparsify", inst, out, keep, range(inst.n_left), range(inst.n_right), params=params, seed=seed)


def trim_large_degree(inst: LabelCoverInstance, threshold: float, seed: int | None = None, max_rounds: int = 1):
    """Drop every vertex of degree above ``threshold`` together with its arcs.

    One sweep suffices: deleting vertices only lowers the remaining degrees.
    ``max_rounds`` is accepted for interface symmetry; resampling lives in the
    pipeline. The trace's ``removed_fraction`` param is removed / (|U| + |W|).
    """
    if threshold <= 0:
        raise PreconditionError("threshold must be positive")
    ld, rd = inst.left_degrees(), inst.right_degrees()
    keep_left = [u for u in range(inst.n_left) if ld[u] <= threshold]
    keep_right = [w for w in range(inst.n_right) if rd[w] <= threshold]
    kl, kr = set(keep_left), set(keep_right)
    keep = [i for i, a in enumerate(inst.arcs) if a.u in kl and a.w in kr]
    removed = inst.n_left + inst.n_right - len(keep_left) - len(keep_right)
    frac = Fraction(removed, inst.n_left + inst.n_right)
    out = _subinstance(inst, keep, keep_left, keep_right)
    params = {"threshold": threshold, "removed_vertices": removed, "removed_fraction": frac}
    return out, _trace("trim", inst, out, keep, keep_left, keep_right, params=params, seed=seed)


# --- pipeline -------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineParams:
    gamma: Fraction
    epsilon: Fraction = Fraction(0)
    d: int | None = None  # None -> ceil(1/gamma)
    trim: Fraction | None = None  # None -> 2 gamma^-1 ln(maxL)
    seed: int = 0
    expander_c: float = 3.0

    def __post_init__(self):
        if not 0 < Fraction(self.gamma) < 1:
            raise PreconditionError("gamma must lie in (0, 1)")
        if not 0 <= Fraction(self.epsilon) < 1:
            raise PreconditionError("epsilon must lie in [0, 1)")
        if self.d is not None and self.d < 1:
            raise PreconditionError("d must be at least 1")

    @property
    def resolved_d(self) -> int:
        return self.d if self.d is not None else math.ceil(1 / Fraction(self.gamma))


def resample_limit(gamma) -> float:
    """Largest tolerated removed-vertex fraction before sparsify is redrawn."""
    return 2.0 ** (1 - float(1 / Fraction(gamma)) / 3)


def run_pipeline(inst: LabelCoverInstance, params: PipelineParams):
    gamma = Fraction(params.gamma)
    traces = []
    cur, t = right_degree_reduce(inst, params.resolved_d, derive_seed(params.seed, "rightdeg"), params.expander_c)
    traces.append(t)
    cur, t = regularize(cur)
    traces.append(t)
    threshold = float(params.trim) if params.trim is not None else trim_threshold(gamma, cur.max_labels)
    n = cur.n_left + cur.n_right
    rounds = max(1, math.ceil(math.log2(max(n, 2)))) + 1
    limit = resample_limit(gamma)
    for attempt in range(rounds):
        sp_out, sp_t = sparsify(cur, gamma, derive_seed(params.seed, "sparsify", attempt))
        tr_out, tr_t = trim_large_degree(sp_out, threshold, derive_seed(params.seed, "trim", attempt))
        if float(tr_t.params["removed_fraction"]) <= limit:
            if attempt:
                sp_t = replace(sp_t, notes=sp_t.notes + (f"accepted on sparsify attempt {attempt + 1}",))
            traces += [sp_t, tr_t]
            return tr_out, traces
    raise PipelineError(f"sparsify: removed fraction exceeded {limit:.4f} in all {rounds} attempts")


def compose_traces(traces) -> PassTrace:
    total = traces[0]
    for t in traces[1:]:
        total = total.compose(t)
    return total


# --- max-to-min ---------------------------------------------------------------------


def max_to_min(inst: LabelCoverInstance, epsilon_budget) -> LabelCoverInstance:
    """Attach costs c1 = |W|, c2 = |U| so that c1|U| = c2|W|."""
    eps = Fraction(epsilon_budget)
    if eps * len(inst.arcs) > min(inst.n_left, inst.n_right):
        raise PreconditionError(
            f"epsilon*|E| = {eps * len(inst.arcs)} exceeds min(|U|,|W|) = {min(inst.n_left, inst.n_right)}"
        )
    return replace(inst, cost_left=Fraction(inst.n_right), cost_right=Fraction(inst.n_left))


def total_budget(inst: LabelCoverInstance) -> Fraction:
    """C = c1|U| + c2|W|."""
    return inst.cost_left * inst.n_left + inst.cost_right * inst.n_right


def repair_labeling(inst: LabelCoverInstance, lab: Labeling) -> MultiLabeling:
    """Start from ``lab`` and add a matching pair to each uncovered arc.

    The added pair keeps ``lab``'s left label a and adds b = pi(a) on the right,
    so each uncovered arc costs at most one extra right label.
    """
    left = [{a} for a in lab.left]
    right = [{b} for b in lab.right]
    for arc in inst.arcs:
        a = lab.left[arc.u]
        if arc.proj[a] != lab.right[arc.w]:
            right[arc.w].add(arc.proj[a])
    return MultiLabeling(tuple(map(frozenset, left)), tuple(map(frozenset, right)))


def expected_covered(inst: LabelCoverInstance, m: MultiLabeling) -> Fraction:
    """Expected covered arcs when each vertex draws uniformly from its set (empty sets read as {0})."""
    left = [s or frozenset([0]) for s in m.left]
    right = [s or frozenset([0]) for s in m.right]
    total = Fraction(0)
    for arc in inst.arcs:
        f1, f2 = left[arc.u], right[arc.w]
        hits = sum(1 for a in f1 if arc.proj[a] in f2)
        total += Fraction(hits, len(f1) * len(f2))
    return total


def round_multi_labeling(inst: LabelCoverInstance, m: MultiLabeling) -> Labeling:
    """Derandomized uniform rounding by conditional expectation.

    Left vertices are fixed first, then right ones, each to the label with the
    largest conditional expectation (smallest label on ties).
    """
    left = [sorted(s) if s else [0] for s in m.left]
    right = [sorted(s) if s else [0] for s in m.right]
    arcs_at_u = [[] for _ in range(inst.n_left)]
    arcs_at_w = [[] for _ in range(inst.n_right)]
    for arc in inst.arcs:
        arcs_at_u[arc.u].append(arc)
        arcs_at_w[arc.w].append(arc)

    def arc_prob(arc, f1, f2):
        return Fraction(sum(1 for a in f1 if arc.proj[a] in f2), len(f1) * len(f2))

    # Only arcs touching the vertex being fixed change their probability.
    for u in range(inst.n_left):
        best, best_val = None, None
        for a in left[u]:
            val = sum((arc_prob(arc, [a], right[arc.w]) for arc in arcs_at_u[u]), Fraction(0))
            if best_val is None or val > best_val:
                best, best_val = a, val
        left[u] = [best]
    for w in range(inst.n_right):
        best, best_val = None, None
        for b in right[w]:
            val = sum(1 for arc in arcs_at_w[w] if arc.proj[left[arc.u][0]] == b)
            if best_val is None or val > best_val:
                best, best_val = b, val
        right[w] = [best]
    return Labeling(tuple(s[0] for s in left), tuple(s[0] for s in right))
