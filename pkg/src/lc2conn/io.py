"""Line-oriented text formats: ``labelcover v1``, ``network v1`` (with layout
lines), ``pipeline v1``, and plain edge-index solution files.

Every writer is deterministic so content digests identify instances.
"""

from __future__ import annotations

import hashlib
import math
from fractions import Fraction

from .core import Arc, LabelCoverInstance, Labeling
from .errors import PreconditionError
from .gadgets.network import INF, Demand, Edge, GadgetLayout, NetworkInstance
from .transforms import PipelineParams


class FormatError(ValueError):
    pass


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _frac(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {tok!r}") from exc


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# --- labelcover v1 --------------------------------------------------------------


def write_labelcover(inst: LabelCoverInstance) -> str:
    out = ["labelcover v1", f"labels {inst.n_labels_left} {inst.n_labels_right}"]
    if inst.has_costs:
        out.append(f"costs {_frac_str(inst.cost_left)} {_frac_str(inst.cost_right)}")
    out.append(f"left {inst.n_left}")
    out.append(f"right {inst.n_right}")
    if inst.multi_arc:
        out.append("multiarc")
    for arc in inst.arcs:
        out.append(" ".join(["arc", str(arc.u), str(arc.w), *map(str, arc.proj)]))
    if inst.planted is not None:
        out.append("planted left " + " ".join(map(str, inst.planted.left)))
        out.append("planted right " + " ".join(map(str, inst.planted.right)))
    return "\n".join(out) + "\n"


def read_labelcover(text: str) -> LabelCoverInstance:
    it = list(_lines(text))
    if not it or it[0][1] != ["labelcover", "v1"]:
        raise FormatError("missing 'labelcover v1' header")
    n1 = n2 = nu = nw = None
    costs = (None, None)
    arcs, multi = [], False
    planted = {}
    for lineno, tok in it[1:]:
        head = tok[0]
        try:
            if head == "labels":
                n1, n2 = int(tok[1]), int(tok[2])
            elif head == "costs":
                costs = (_frac(tok[1]), _frac(tok[2]))
            elif head == "left":
                nu = int(tok[1])
            elif head == "right":
                nw = int(tok[1])
            elif head == "multiarc":
                multi = True
            elif head == "arc":
                arcs.append(Arc(int(tok[1]), int(tok[2]), tuple(int(x) for x in tok[3:])))
            elif head == "planted":
                planted[tok[1]] = tuple(int(x) for x in tok[2:])
            else:
                raise FormatError(f"line {lineno}: unknown directive {head!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {lineno}: malformed {head!r} line") from exc
    if None in (n1, n2, nu, nw):
        raise FormatError("labels, left and right lines are required")
    plant = Labeling(planted["left"], planted["right"]) if {"left", "right"} <= planted.keys() else None
    return LabelCoverInstance(nu, nw, n1, n2, tuple(arcs), costs[0], costs[1], multi, plant)


def digest_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def digest_labelcover(inst: LabelCoverInstance) -> str:
    return digest_text(write_labelcover(inst))


# --- network v1 -----------------------------------------------------------------


def _cost_str(c) -> str:
    if c == INF:
        return "inf"
    c = Fraction(c)
    return "0" if c == 0 else _frac_str(c)


def _side_name(side: str, v: int) -> str:
    return f"{'u' if side == 'L' else 'w'}{v}"


def write_network(net: NetworkInstance, layout: GadgetLayout | None = None) -> str:
    out = [
        "network v1",
        "directed" if net.directed else "undirected",
        f"kind {net.kind}",
        f"k {net.k}",
    ]
    for v, role in enumerate(net.roles):
        out.append(f"vertex {v} {role}")
    for e in net.edges:
        out.append(f"edge {e.u} {e.v} cost {_cost_str(e.cost)} mult {e.mult}")
    if net.root is not None:
        out.append(f"root {net.root}")
    for t in net.terminals:
        out.append(f"terminal {t}")
    for d in net.demands:
        out.append(f"demand {d.s} {d.t} req {d.req}")
    if layout is not None:
        for (side, v, lab), e in sorted(layout.label_edge.items(), key=lambda kv: kv[1]):
            out.append(f"labeledge {_side_name(side, v)} {lab} {e}")
        for d, (u, w) in enumerate(layout.demand_arcs):
            out.append(f"demandarc {u} {w} {d}")
        for d in sorted(layout.padding):
            for name in sorted(layout.padding[d]):
                out.append(" ".join(["padset", str(d), name, *map(str, layout.padding[d][name])]))
        for d in sorted(layout.stations):
            st = layout.stations[d]
            if st and isinstance(st[0][0], tuple):  # merged: one station list per member
                continue
            for group in st:
                out.append(" ".join(["station", str(d), *map(str, group)]))
        for c, cls in enumerate(layout.classes):
            out.append(" ".join(["class", str(c), *map(str, cls)]))
    return "\n".join(out) + "\n"


def read_network(text: str) -> tuple[NetworkInstance, GadgetLayout | None]:
    it = list(_lines(text))
    if not it or it[0][1] != ["network", "v1"]:
        raise FormatError("missing 'network v1' header")
    directed = None
    kind, k, root = None, None, None
    roles: dict[int, str] = {}
    edges, terminals, demands = [], [], []
    label_edge, demand_arcs, padding, stations, classes = {}, {}, {}, {}, {}
    has_layout = False
    for lineno, tok in it[1:]:
        head = tok[0]
        try:
            if head in ("directed", "undirected"):
                directed = head == "directed"
            elif head == "kind":
                kind = tok[1]
            elif head == "k":
                k = int(tok[1])
            elif head == "vertex":
                roles[int(tok[1])] = tok[2] if len(tok) > 2 else "plain"
            elif head == "edge":
                if tok[3] != "cost" or tok[5] != "mult":
                    raise FormatError(f"line {lineno}: expected 'edge u v cost c mult m'")
                cost = INF if tok[4] == "inf" else _frac(tok[4])
                edges.append(Edge(int(tok[1]), int(tok[2]), cost, int(tok[6])))
            elif head == "root":
                root = int(tok[1])
            elif head == "terminal":
                terminals.append(int(tok[1]))
            elif head == "demand":
                demands.append(Demand(int(tok[1]), int(tok[2]), int(tok[4])))
            elif head == "labeledge":
                has_layout = True
                name = tok[1]
                side = {"u": "L", "w": "R"}[name[0]]
                label_edge[(side, int(name[1:]), int(tok[2]))] = int(tok[3])
            elif head == "demandarc":
                has_layout = True
                demand_arcs[int(tok[3])] = (int(tok[1]), int(tok[2]))
            elif head == "padset":
                padding.setdefault(int(tok[1]), {})[tok[2]] = tuple(int(x) for x in tok[3:])
            elif head == "station":
                stations.setdefault(int(tok[1]), []).append(tuple(int(x) for x in tok[2:]))
            elif head == "class":
                classes[int(tok[1])] = tuple(int(x) for x in tok[2:])
            else:
                raise FormatError(f"line {lineno}: unknown directive {head!r}")
        except (IndexError, ValueError, KeyError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {lineno}: malformed {head!r} line") from exc
    if directed is None or kind is None or k is None:
        raise FormatError("directedness, kind and k are required")
    if sorted(roles) != list(range(len(roles))):
        raise FormatError("vertex indices must be 0..n-1")
    net = NetworkInstance(
        directed,
        kind,
        k,
        tuple(roles[v] for v in range(len(roles))),
        tuple(edges),
        root,
        tuple(terminals),
        tuple(demands),
    )
    layout = None
    if has_layout:
        layout = GadgetLayout(
            label_edge,
            tuple(demand_arcs[d] for d in sorted(demand_arcs)),
            padding,
            {d: tuple(v) for d, v in stations.items()},
            tuple(classes[c] for c in sorted(classes)),
        )
    return net, layout


# --- pipeline v1 ------------------------------------------------------------------


def read_pipeline(text: str) -> PipelineParams:
    it = list(_lines(text))
    if not it or it[0][1] != ["pipeline", "v1"]:
        raise FormatError("missing 'pipeline v1' header")
    vals = {tok[0]: tok[1] for _, tok in it[1:] if len(tok) >= 2}
    unknown = set(vals) - {"gamma", "epsilon", "d", "seed", "trim"}
    if unknown:
        raise FormatError(f"unknown pipeline keys {sorted(unknown)}")
    if "gamma" not in vals:
        raise FormatError("gamma is required")
    d = vals.get("d", "auto")
    trim = vals.get("trim", "auto")
    try:
        return PipelineParams(
            gamma=_frac(vals["gamma"]),
            epsilon=_frac(vals.get("epsilon", "0")),
            d=None if d == "auto" else int(d),
            trim=None if trim == "auto" else _frac(trim),
            seed=int(vals.get("seed", "0")),
        )
    except PreconditionError as exc:
        raise FormatError(str(exc)) from exc


def write_pipeline(p: PipelineParams) -> str:
    return "\n".join(
        [
            "pipeline v1",
            f"gamma {_frac_str(p.gamma)}",
            f"epsilon {_frac_str(p.epsilon)}",
            f"d {'auto' if p.d is None else p.d}",
            f"seed {p.seed}",
            f"trim {'auto' if p.trim is None else _frac_str(p.trim)}",
        ]
    ) + "\n"


# --- solutions and colorings -----------------------------------------------------


def write_solution(edges) -> str:
    return "".join(f"{e}\n" for e in sorted(edges))


def read_solution(text: str) -> list[int]:
    out = []
    for lineno, tok in _lines(text):
        try:
            out.append(int(tok[0]))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: expected an edge index") from exc
    return out


def write_coloring(coloring) -> str:
    return "".join(f"color {i} {c}\n" for i, c in enumerate(coloring.color_of))


def fmt_cost(c) -> str:
    if c == INF or (isinstance(c, float) and math.isinf(c)):
        return "inf"
    return str(Fraction(c))
