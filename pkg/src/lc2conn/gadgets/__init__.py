"""Label cover -> vertex-connectivity gadgets."""

from ..errors import MergeError
from .directed import merge_terminals_directed, to_directed_rooted
from .kroute import merge_demands_kroute, to_kroute_cut
from .network import (
    INF,
    Demand,
    Edge,
    GadgetLayout,
    MergedInstance,
    NetworkInstance,
    labeling_to_solution,
    solution_to_labeling,
)
from .undirected import to_undirected_rooted, to_vc_sndp

REDUCERS = {
    "rootedDirected": to_directed_rooted,
    "rootedUndirected": to_undirected_rooted,
    "vcSndp": to_vc_sndp,
    "kRouteCut": to_kroute_cut,
}


def reduce(lc, kind: str):
    return REDUCERS[kind](lc)


def merge_demands(net, layout, coloring, kind=None):
    kind = kind or net.kind
    if kind == "rootedDirected":
        return merge_terminals_directed(net, layout, coloring)
    if kind == "kRouteCut":
        return merge_demands_kroute(net, layout, coloring)
    raise MergeError(f"merging is defined for rootedDirected and kRouteCut, not {kind}")


__all__ = [
    "INF",
    "Demand",
    "Edge",
    "GadgetLayout",
    "MergedInstance",
    "NetworkInstance",
    "REDUCERS",
    "labeling_to_solution",
    "merge_demands",
    "merge_terminals_directed",
    "merge_demands_kroute",
    "reduce",
    "solution_to_labeling",
    "to_directed_rooted",
    "to_kroute_cut",
    "to_undirected_rooted",
    "to_vc_sndp",
]
