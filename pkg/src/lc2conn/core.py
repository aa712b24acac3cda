"""Label-cover instances, labelings, and the exhaustive ground-truth solvers.

Vertices and labels are 0-based indices. Costs are exact ``Fraction`` values.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, ConfigurationError, DomainError, InfeasibleProfile
from .rng import stream

DEFAULT_CAP = 1 << 22


@dataclass(frozen=True)
class Arc:
    u: int
    w: int
    proj: tuple[int, ...]


@dataclass(frozen=True)
class Labeling:
    left: tuple[int, ...]
    right: tuple[int, ...]


@dataclass(frozen=True)
class MultiLabeling:
    left: tuple[frozenset, ...]
    right: tuple[frozenset, ...]

    @classmethod
    def from_labeling(cls, lab: Labeling) -> MultiLabeling:
        return cls(tuple(frozenset([a]) for a in lab.left), tuple(frozenset([b]) for b in lab.right))

    @classmethod
    def empty(cls, n_left: int, n_right: int) -> MultiLabeling:
        return cls((frozenset(),) * n_left, (frozenset(),) * n_right)


@dataclass(frozen=True)
class LabelCoverInstance:
    n_left: int
    n_right: int
    n_labels_left: int
    n_labels_right: int
    arcs: tuple[Arc, ...]
    cost_left: Fraction | None = None
    cost_right: Fraction | None = None
    multi_arc: bool = False
    planted: Labeling | None = field(default=None, compare=False)

    @property
    def has_costs(self) -> bool:
        return self.cost_left is not None and self.cost_right is not None

    @property
    def max_labels(self) -> int:
        return max(self.n_labels_left, self.n_labels_right)

    def left_degrees(self) -> list[int]:
        deg = [0] * self.n_left
        for arc in self.arcs:
            deg[arc.u] += 1
        return deg

    def right_degrees(self) -> list[int]:
        deg = [0] * self.n_right
        for arc in self.arcs:
            deg[arc.w] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.left_degrees() + self.right_degrees() + [0])


def instance(n_left, n_right, n_labels_left, n_labels_right, arcs, costs=None, multi_arc=False):
    """Convenience constructor taking ``(u, w, proj)`` triples."""
    c1 = c2 = None
    if costs is not None:
        c1, c2 = (Fraction(c) for c in costs)
    return LabelCoverInstance(
        n_left,
        n_right,
        n_labels_left,
        n_labels_right,
        tuple(Arc(u, w, tuple(p)) for u, w, p in arcs),
        c1,
        c2,
        multi_arc,
    )


def validate(inst: LabelCoverInstance) -> list[str]:
    problems = []
    if inst.n_left < 1:
        problems.append("left vertex set is empty")
    if inst.n_right < 1:
        problems.append("right vertex set is empty")
    if inst.n_labels_left < 1:
        problems.append("left label set is empty")
    if inst.n_labels_right < 1:
        problems.append("right label set is empty")
    for name, c in (("left", inst.cost_left), ("right", inst.cost_right)):
        if c is not None and c < 0:
            problems.append(f"{name} label cost {c} is negative")
    seen = set()
    for idx, arc in enumerate(inst.arcs):
        tag = f"arc {idx} ({arc.u},{arc.w})"
        if not 0 <= arc.u < inst.n_left:
            problems.append(f"{tag}: left endpoint {arc.u} out of range")
        if not 0 <= arc.w < inst.n_right:
            problems.append(f"{tag}: right endpoint {arc.w} out of range")
        if len(arc.proj) != inst.n_labels_left:
            problems.append(
                f"{tag}: projection defined on {len(arc.proj)} of {inst.n_labels_left} left labels"
            )
        bad = [b for b in arc.proj if not 0 <= b < inst.n_labels_right]
        if bad:
            problems.append(f"{tag}: projection images {bad} outside right labels")
        if (arc.u, arc.w) in seen and not inst.multi_arc:
            problems.append(f"{tag}: parallel arc while multi-arc flag is off")
        seen.add((arc.u, arc.w))
    return problems


def _check_labeling(inst: LabelCoverInstance, lab: Labeling) -> None:
    if len(lab.left) != inst.n_left or len(lab.right) != inst.n_right:
        raise DomainError("labeling is not total on U and W")
    for a in lab.left:
        if not 0 <= a < inst.n_labels_left:
            raise DomainError(f"left label {a} outside L1")
    for b in lab.right:
        if not 0 <= b < inst.n_labels_right:
            raise DomainError(f"right label {b} outside L2")


def covered_count(inst: LabelCoverInstance, lab: Labeling) -> int:
    _check_labeling(inst, lab)
    return sum(1 for arc in inst.arcs if arc.proj[lab.left[arc.u]] == lab.right[arc.w])


def coverage_fraction(inst: LabelCoverInstance, lab: Labeling) -> Fraction:
    """Fraction of arcs (with multiplicity) covered; an arc-free instance counts as fully covered."""
    covered = covered_count(inst, lab)
    if not inst.arcs:
        return Fraction(1)
    return Fraction(covered, len(inst.arcs))


def _require_costs(inst: LabelCoverInstance) -> tuple[Fraction, Fraction]:
    if not inst.has_costs:
        raise ConfigurationError("instance carries no label costs")
    return inst.cost_left, inst.cost_right


def multi_cost(inst: LabelCoverInstance, m: MultiLabeling) -> Fraction:
    c1, c2 = _require_costs(inst)
    return c1 * sum(len(s) for s in m.left) + c2 * sum(len(s) for s in m.right)


def arc_covered_by(arc: Arc, left_set, right_set) -> bool:
    return any(arc.proj[a] in right_set for a in left_set)


def is_feasible(inst: LabelCoverInstance, m: MultiLabeling) -> bool:
    _require_costs(inst)
    return all(arc_covered_by(arc, m.left[arc.u], m.right[arc.w]) for arc in inst.arcs)


def uncovered_arcs(inst: LabelCoverInstance, m: MultiLabeling) -> list[int]:
    return [i for i, arc in enumerate(inst.arcs) if not arc_covered_by(arc, m.left[arc.u], m.right[arc.w])]


def brute_force_max(inst: LabelCoverInstance, cap: int = DEFAULT_CAP) -> tuple[Labeling, Fraction]:
    """Exact maximum coverage with the lexicographically first optimal labeling.

    Labelings are ordered by ``(left tuple, right tuple)``. Only right labelings
    are enumerated; for a fixed right labeling every left vertex is optimised
    independently, which is exact.
    """
    size = inst.n_labels_left**inst.n_left * inst.n_labels_right**inst.n_right
    if size > cap:
        raise CapExceeded("brute_force_max", size, cap)
    if not inst.arcs:
        return Labeling((0,) * inst.n_left, (0,) * inst.n_right), Fraction(1)

    rights = np.array(
        list(itertools.product(range(inst.n_labels_right), repeat=inst.n_right)), dtype=np.int64
    ).reshape(-1, inst.n_right)
    score = np.zeros((len(rights), inst.n_left, inst.n_labels_left), dtype=np.int64)
    for arc in inst.arcs:
        proj = np.asarray(arc.proj, dtype=np.int64)
        score[:, arc.u, :] += proj[None, :] == rights[:, arc.w][:, None]
    best_left = score.argmax(axis=2)  # first maximiser = smallest label
    totals = score.max(axis=2).sum(axis=1)
    best = totals.max()
    rows = np.flatnonzero(totals == best)
    keys = np.concatenate([best_left[rows], rights[rows]], axis=1)
    first = rows[np.lexsort(keys.T[::-1])[0]]
    lab = Labeling(tuple(int(a) for a in best_left[first]), tuple(int(b) for b in rights[first]))
    return lab, Fraction(int(best), len(inst.arcs))


def _scaled_costs(c1: Fraction, c2: Fraction) -> tuple[int, int]:
    den = math.lcm(c1.denominator, c2.denominator)
    return int(c1 * den), int(c2 * den)


def multilabeling_bits(inst: LabelCoverInstance) -> list[tuple[str, int, int]]:
    """Bit order shared by every exhaustive multi-labeling search: left (u, a) then right (w, b)."""
    bits = [("L", u, a) for u in range(inst.n_left) for a in range(inst.n_labels_left)]
    bits += [("R", w, b) for w in range(inst.n_right) for b in range(inst.n_labels_right)]
    return bits


def multilabeling_from_mask(inst: LabelCoverInstance, mask: int) -> MultiLabeling:
    left = [set() for _ in range(inst.n_left)]
    right = [set() for _ in range(inst.n_right)]
    for i, (side, v, lab) in enumerate(multilabeling_bits(inst)):
        if mask >> i & 1:
            (left if side == "L" else right)[v].add(lab)
    return MultiLabeling(tuple(map(frozenset, left)), tuple(map(frozenset, right)))


def brute_force_min_cost(inst: LabelCoverInstance, cap: int = DEFAULT_CAP) -> tuple[MultiLabeling, Fraction]:
    """Exact minimum-cost covering multi-labeling.

    Ties go to the candidate with the smallest bit mask under ``multilabeling_bits``.
    """
    c1, c2 = _require_costs(inst)
    nl = inst.n_left * inst.n_labels_left
    nbits = nl + inst.n_right * inst.n_labels_right
    size = 1 << nbits
    if size > cap:
        raise CapExceeded("brute_force_min_cost", size, cap)
    masks = np.arange(size, dtype=np.int64)
    feasible = np.ones(size, dtype=bool)
    for arc in inst.arcs:
        cov = np.zeros(size, dtype=bool)
        for a, b in enumerate(arc.proj):
            lbit = arc.u * inst.n_labels_left + a
            rbit = nl + arc.w * inst.n_labels_right + b
            cov |= ((masks >> lbit) & (masks >> rbit) & 1).astype(bool)
        feasible &= cov
    # Total projections make the all-labels multi-labeling feasible.
    assert feasible[-1], "all-labels multi-labeling must cover every arc"
    w1, w2 = _scaled_costs(c1, c2)
    left_count = np.bitwise_count(masks & ((1 << nl) - 1)).astype(np.int64)
    right_count = np.bitwise_count(masks >> nl).astype(np.int64)
    cost = np.where(feasible, w1 * left_count + w2 * right_count, np.iinfo(np.int64).max)
    best = int(np.argmin(cost))  # argmin returns the first (smallest mask) minimiser
    m = multilabeling_from_mask(inst, best)
    return m, multi_cost(inst, m)


@dataclass(frozen=True)
class DegreeProfile:
    max_left: int
    min_left: int
    avg_left: Fraction
    max_right: int
    min_right: int
    avg_right: Fraction
    max_degree: int
    q1: Fraction
    q2: Fraction

    def as_dict(self) -> dict:
        return {k: str(v) for k, v in self.__dict__.items()}


def degree_profile(inst: LabelCoverInstance) -> DegreeProfile:
    ld, rd = inst.left_degrees(), inst.right_degrees()
    m = len(inst.arcs)
    avg_l = Fraction(m, len(ld)) if ld else Fraction(0)
    avg_r = Fraction(m, len(rd)) if rd else Fraction(0)
    max_l, max_r = max(ld, default=0), max(rd, default=0)
    return DegreeProfile(
        max_left=max_l,
        min_left=min(ld, default=0),
        avg_left=avg_l,
        max_right=max_r,
        min_right=min(rd, default=0),
        avg_right=avg_r,
        max_degree=max(max_l, max_r),
        q1=max_l / avg_l if avg_l else Fraction(1),
        q2=max_r / avg_r if avg_r else Fraction(1),
    )


@dataclass(frozen=True)
class InstanceProfile:
    n_left: int
    n_right: int
    n_labels_left: int
    n_labels_right: int
    degree: int
    epsilon: Fraction = Fraction(0)


def random_instance(profile: InstanceProfile, seed: int) -> LabelCoverInstance:
    """Left-regular instance with a planted labeling covering at least 1 - epsilon of the arcs.

    ``epsilon = 1`` gives fully random projections (the plant is still recorded).
    """
    p = profile
    eps = Fraction(p.epsilon)
    if min(p.n_left, p.n_right, p.n_labels_left, p.n_labels_right) < 1:
        raise InfeasibleProfile("vertex and label sets must be nonempty")
    if not 1 <= p.degree <= p.n_right:
        raise InfeasibleProfile(f"left degree {p.degree} must lie in [1, |W|={p.n_right}]")
    if not 0 <= eps <= 1:
        raise InfeasibleProfile(f"epsilon {eps} outside [0, 1]")
    rng = stream(seed, "random_instance")
    f1 = rng.integers(p.n_labels_left, size=p.n_left)
    f2 = rng.integers(p.n_labels_right, size=p.n_right)
    ends = [(u, int(w)) for u in range(p.n_left) for w in np.sort(rng.choice(p.n_right, p.degree, replace=False))]
    m = len(ends)
    n_consistent = math.ceil((1 - eps) * m)
    consistent = set(rng.choice(m, n_consistent, replace=False).tolist())
    arcs = []
    for idx, (u, w) in enumerate(ends):
        proj = rng.integers(p.n_labels_right, size=p.n_labels_left)
        if idx in consistent:
            proj[f1[u]] = f2[w]
        arcs.append(Arc(u, w, tuple(int(b) for b in proj)))
    planted = Labeling(tuple(int(a) for a in f1), tuple(int(b) for b in f2))
    return LabelCoverInstance(
        p.n_left, p.n_right, p.n_labels_left, p.n_labels_right, tuple(arcs), planted=planted
    )


def with_costs(inst: LabelCoverInstance, c1, c2) -> LabelCoverInstance:
    from dataclasses import replace

    return replace(inst, cost_left=Fraction(c1), cost_right=Fraction(c2))


def arc_multiset(inst: LabelCoverInstance) -> Counter:
    return Counter((a.u, a.w, a.proj) for a in inst.arcs)
