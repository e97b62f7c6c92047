"""Network coding via the index coding reduction.

Pipeline: split capacities into unit edges, rewrite the network as an
index coding instance (one Y message per unit edge, receivers for edges,
demands, and a length-forcing all-sources group), run the rank sweep, and
compare r_star against the capacity sum.  A match yields local encoding
coefficients and per-destination decoding maps read off the completion;
anything else is reported as unknown rather than as a proof of
infeasibility.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .codec import IndexCode, make_index_code
from .pattern import PatternMatrix
from .rankmin import SolverConfig, SolverOutcome, project_D, spectral_norm, sweep

__all__ = [
    "ExtractionError",
    "ICInstance",
    "InconsistentCodeError",
    "NetworkCode",
    "NetworkSpec",
    "Receiver",
    "UNKNOWN_MESSAGE",
    "UnitEdge",
    "Unknown",
    "UnsupportedTopologyError",
    "extract_network_code",
    "evaluate_code",
    "format_network",
    "format_network_code",
    "load_network",
    "parse_network",
    "reduce_to_index_coding",
    "save_network",
    "solve_network",
    "split_capacities",
]

UNKNOWN_MESSAGE = (
    "Either the network does not admit a linear network code or the rank "
    "minimization method could not find an optimal index coding solution."
)


class UnsupportedTopologyError(ValueError):
    """The network has a directed cycle after capacity splitting."""


class ExtractionError(RuntimeError):
    """A local encoding fit missed its tolerance; the completion is not
    realizable edge by edge."""


class InconsistentCodeError(RuntimeError):
    """An extracted code failed decode simulation despite the matching rank."""


def _check_name(name: str, what: str) -> None:
    if not name or any(ch.isspace() for ch in name):
        raise ValueError(f"{what} name {name!r} must be non-empty without whitespace")


@dataclass(frozen=True)
class NetworkSpec:
    """Directed capacitated network with named source messages and demands.

    ``sources`` maps each message to its origin as (message, node) pairs;
    ``demands`` lists (destination node, demanded message).
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, int], ...]
    sources: tuple[tuple[str, str], ...]
    demands: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        object.__setattr__(self, "sources", tuple(tuple(s) for s in self.sources))
        object.__setattr__(self, "demands", tuple(tuple(d) for d in self.demands))
        seen = set()
        for v in self.nodes:
            _check_name(v, "node")
            if v in seen:
                raise ValueError(f"duplicate node {v!r}")
            seen.add(v)
        for tail, head, cap in self.edges:
            if tail not in seen or head not in seen:
                raise ValueError(f"edge ({tail}, {head}) references an unknown node")
            if not isinstance(cap, int) or cap < 1:
                raise ValueError(f"edge ({tail}, {head}) needs a positive integer capacity")
        msgs = set()
        for msg, origin in self.sources:
            _check_name(msg, "message")
            if msg in msgs:
                raise ValueError(f"message {msg!r} declared twice")
            msgs.add(msg)
            if origin not in seen:
                raise ValueError(f"source {msg!r} placed at unknown node {origin!r}")
        for dest, msg in self.demands:
            if dest not in seen:
                raise ValueError(f"demand at unknown node {dest!r}")
            if msg not in msgs:
                raise ValueError(f"demand for {msg!r}, which no source provides")

    @property
    def capacity_sum(self) -> int:
        return sum(cap for _, _, cap in self.edges)

    @property
    def messages(self) -> tuple[str, ...]:
        return tuple(msg for msg, _ in self.sources)


@dataclass(frozen=True)
class UnitEdge:
    tail: str
    head: str
    copy: int
    name: str


@dataclass(frozen=True)
class Receiver:
    """Index coding receiver: one wanted message index, a cached index set,
    and its provenance in the network (edge, demand, or length-forcing)."""

    wants: int
    has: frozenset[int]
    role: tuple


@dataclass(frozen=True)
class ICInstance:
    """Index coding form of a unit-capacity network."""

    messages: tuple[str, ...]
    k: int
    unit_edges: tuple[UnitEdge, ...]
    receivers: tuple[Receiver, ...]
    trivial_demands: tuple[tuple[str, str], ...]

    @property
    def n_messages(self) -> int:
        return len(self.messages)


@dataclass(frozen=True)
class NetworkCode:
    """Local edge functions plus destination decoding maps.

    ``edge_coefficients[t]`` lists (input message name, coefficient) for
    unit edge t over the symbols available at its tail; ``decode_maps``
    holds (node, message, terms) per served demand; ``global_map`` is the
    unit-edges x sources matrix sending X to every Y.
    """

    messages: tuple[str, ...]
    k: int
    unit_edges: tuple[UnitEdge, ...]
    edge_coefficients: tuple[tuple[tuple[str, float], ...], ...]
    decode_maps: tuple[tuple[str, str, tuple[tuple[str, float], ...]], ...]
    trivial_demands: tuple[tuple[str, str], ...]
    global_map: np.ndarray
    r_star: int


@dataclass(frozen=True)
class Unknown:
    """Inconclusive outcome: the rank never matched the capacity sum."""

    message: str = UNKNOWN_MESSAGE
    outcome: SolverOutcome | None = None


def split_capacities(net: NetworkSpec) -> NetworkSpec:
    """Replace every capacity-c edge with c parallel unit edges."""
    edges = []
    for tail, head, cap in net.edges:
        edges.extend((tail, head, 1) for _ in range(cap))
    return replace(net, edges=tuple(edges))


def _topological_nodes(net: NetworkSpec) -> list[str]:
    indeg = {v: 0 for v in net.nodes}
    for _, head, _ in net.edges:
        indeg[head] += 1
    order: list[str] = []
    done: set[str] = set()
    while len(order) < len(net.nodes):
        pick = next((v for v in net.nodes if v not in done and indeg[v] == 0), None)
        if pick is None:
            raise UnsupportedTopologyError("network contains a directed cycle")
        done.add(pick)
        order.append(pick)
        for tail, head, _ in net.edges:
            if tail == pick:
                indeg[head] -= 1
    return order


def _unit_edges(net: NetworkSpec) -> list[UnitEdge]:
    """Unit edges sorted topologically, so every in-edge of a tail precedes
    the edges out of it."""
    pos = {v: i for i, v in enumerate(_topological_nodes(net))}
    raw = [(pos[t], pos[h], i, t, h) for i, (t, h, _) in enumerate(net.edges)]
    raw.sort()
    pair_total: dict[tuple[str, str], int] = {}
    for _, _, _, t, h in raw:
        pair_total[(t, h)] = pair_total.get((t, h), 0) + 1
    pair_seen: dict[tuple[str, str], int] = {}
    out = []
    for _, _, _, t, h in raw:
        copy = pair_seen.get((t, h), 0)
        pair_seen[(t, h)] = copy + 1
        name = f"{t}->{h}" if pair_total[(t, h)] == 1 else f"{t}->{h}#{copy + 1}"
        out.append(UnitEdge(t, h, copy, name))
    return out


def reduce_to_index_coding(net: NetworkSpec) -> ICInstance:
    """Rewrite a unit-capacity acyclic network as an index coding instance.

    Messages are the k sources followed by one Y per unit edge.  Receivers:
    per edge, a receiver wanting Y_e holding the tail's inputs; per demand,
    a receiver wanting the message and holding the destination's inputs; per
    edge, an all-sources receiver wanting Y_e (this group pins the optimal
    code length to the capacity sum).  Demands already satisfied at their
    destination are set aside as trivial.
    """
    if any(cap != 1 for _, _, cap in net.edges):
        raise ValueError("reduce expects unit capacities; run split_capacities first")
    units = _unit_edges(net)
    k = len(net.sources)
    messages = list(net.messages) + [f"Y({e.name})" for e in units]
    msg_index = {m: i for i, m in enumerate(net.messages)}
    sourced_at: dict[str, list[int]] = {}
    for i, (_, origin) in enumerate(net.sources):
        sourced_at.setdefault(origin, []).append(i)
    into: dict[str, list[int]] = {}
    for t, e in enumerate(units):
        into.setdefault(e.head, []).append(t)

    def inputs_at(node: str) -> frozenset[int]:
        own = sourced_at.get(node, [])
        arriving = [k + t for t in into.get(node, [])]
        return frozenset(own) | frozenset(arriving)

    receivers = [
        Receiver(k + t, inputs_at(e.tail), ("edge", t)) for t, e in enumerate(units)
    ]
    trivial = []
    for dest, msg in net.demands:
        if msg_index[msg] in sourced_at.get(dest, []):
            trivial.append((dest, msg))
        else:
            receivers.append(Receiver(msg_index[msg], inputs_at(dest), ("demand", dest, msg)))
    all_sources = frozenset(range(k))
    receivers.extend(
        Receiver(k + t, all_sources, ("length", t)) for t in range(len(units))
    )
    return ICInstance(
        messages=tuple(messages),
        k=k,
        unit_edges=tuple(units),
        receivers=tuple(receivers),
        trivial_demands=tuple(trivial),
    )


def _empty_code(ic: ICInstance) -> NetworkCode:
    return NetworkCode(
        messages=ic.messages,
        k=ic.k,
        unit_edges=(),
        edge_coefficients=(),
        decode_maps=(),
        trivial_demands=ic.trivial_demands,
        global_map=np.zeros((0, ic.k)),
        r_star=0,
    )


def extract_network_code(ic: ICInstance, code: IndexCode, net: NetworkSpec) -> NetworkCode:
    """Read local encodings and decode maps off the completion.

    The fixed projection of m_star turns each edge receiver's row into the
    decode identity Y_e = -(sum of row coefficients times the tail's
    inputs); propagating those in topological order gives each Y_e as a
    global function of X.  Local coefficients are then re-fit against the
    tail inputs' global functions by least squares, each fit within 1e-6
    relative, and demand rows give the decoding maps the same way.
    """
    e_cnt = len(ic.unit_edges)
    if code.r_star != net.capacity_sum:
        raise ValueError("extraction requires r_star equal to the capacity sum")
    if e_cnt == 0:
        return _empty_code(ic)
    k = ic.k
    m_d = project_D(code.m_star, code.pattern)
    basis = np.eye(k)
    glob = np.zeros((e_cnt, k))
    raw_coeffs: list[np.ndarray] = []
    inputs: list[list[int]] = []

    def global_of(j: int) -> np.ndarray:
        return basis[j] if j < k else glob[j - k]

    for t in range(e_cnt):
        rec = ic.receivers[t]
        if rec.role != ("edge", t):
            raise ValueError("receiver list out of order; not a reduced instance")
        cols = sorted(rec.has)
        if any(j >= k + t for j in cols):
            raise ValueError("edge inputs violate the topological order")
        coeffs = np.array([-m_d[t, j] for j in cols])
        raw_coeffs.append(coeffs)
        inputs.append(cols)
        if cols:
            glob[t] = coeffs @ np.stack([global_of(j) for j in cols])

    edge_terms = []
    for t in range(e_cnt):
        cols = inputs[t]
        if not cols:
            edge_terms.append(())
            continue
        design = np.stack([global_of(j) for j in cols], axis=1)
        sol, _, _, _ = np.linalg.lstsq(design, glob[t], rcond=None)
        scale = max(float(np.linalg.norm(glob[t])), 1e-12)
        rel = float(np.linalg.norm(design @ sol - glob[t])) / scale
        if rel > 1e-6:
            raise ExtractionError(
                f"edge {ic.unit_edges[t].name}: local fit residual {rel:.2e} exceeds 1e-6"
            )
        edge_terms.append(tuple((ic.messages[j], float(c)) for j, c in zip(cols, sol)))

    decode_maps = []
    for idx, rec in enumerate(ic.receivers):
        if rec.role[0] != "demand":
            continue
        _, dest, msg = rec.role
        cols = sorted(rec.has)
        terms = tuple((ic.messages[j], float(-m_d[idx, j])) for j in cols)
        decode_maps.append((dest, msg, terms))

    return NetworkCode(
        messages=ic.messages,
        k=k,
        unit_edges=ic.unit_edges,
        edge_coefficients=tuple(edge_terms),
        decode_maps=tuple(decode_maps),
        trivial_demands=ic.trivial_demands,
        global_map=glob,
        r_star=code.r_star,
    )


def evaluate_code(nc: NetworkCode, x: np.ndarray) -> tuple[dict[str, float], dict[tuple[str, str], float]]:
    """Simulate the code on one message vector using only local functions.

    Returns (symbol values by message name, decoded value per (node, msg)
    demand).  Trivial demands decode to the source symbol itself.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (nc.k,):
        raise ValueError(f"expected {nc.k} source symbols")
    values = {nc.messages[i]: float(x[i]) for i in range(nc.k)}
    for t, _ in enumerate(nc.unit_edges):
        name = nc.messages[nc.k + t]
        values[name] = float(sum(c * values[sym] for sym, c in nc.edge_coefficients[t]))
    decoded = {}
    for dest, msg, terms in nc.decode_maps:
        decoded[(dest, msg)] = float(sum(c * values[sym] for sym, c in terms))
    for dest, msg in nc.trivial_demands:
        decoded[(dest, msg)] = values[msg]
    return values, decoded


def _verification_tolerance(ic: ICInstance, code: IndexCode, nc: NetworkCode, residual: float) -> float:
    """Bound on any decoded error for |X_i| <= 1, propagated from the
    completion residual: each demand row is (nearly) a combination of the
    edge rows, which annihilate realized symbol vectors by construction."""
    e_cnt = len(ic.unit_edges)
    demand_rows = [i for i, r in enumerate(ic.receivers) if r.role[0] == "demand"]
    b_norm = 0.0
    if demand_rows and e_cnt:
        a_part = code.m_star[:e_cnt]
        b_part = code.m_star[demand_rows]
        coeff, _, _, _ = np.linalg.lstsq(a_part.T, b_part.T, rcond=None)
        b_norm = spectral_norm(coeff.T)
    w_norm = spectral_norm(nc.global_map)
    bound = residual * np.sqrt(ic.k) * (1.0 + b_norm) * np.sqrt(1.0 + w_norm**2)
    return max(float(bound), 1e-9)


def _verify_code(ic: ICInstance, code: IndexCode, nc: NetworkCode, residual: float, seed: int) -> None:
    if ic.k == 0:
        return
    tol = _verification_tolerance(ic, code, nc, residual)
    rng = np.random.default_rng([seed, ic.k, len(ic.unit_edges)])
    for _ in range(100):
        x = rng.uniform(-1.0, 1.0, ic.k)
        _, decoded = evaluate_code(nc, x)
        for (dest, msg), value in decoded.items():
            want = x[list(nc.messages).index(msg)]
            if abs(value - want) > tol:
                raise InconsistentCodeError(
                    f"demand ({dest}, {msg}) decoded to {value:.6g}, "
                    f"expected {want:.6g} within {tol:.2e}"
                )


def solve_network(net: NetworkSpec, cfg: SolverConfig) -> NetworkCode | Unknown:
    """Full pipeline: split, reduce, rank-sweep, compare with the capacity sum.

    The sweep runs the SVD counterpart of the configured variant, since the
    reduced pattern is rectangular.  A rank match yields an extracted code
    verified by simulation; anything else returns Unknown.
    """
    unit_net = split_capacities(net)
    ic = reduce_to_index_coding(unit_net)
    if not ic.receivers:
        return _empty_code(ic)
    pattern = PatternMatrix.from_receivers(
        ic.n_messages, [(r.wants, r.has) for r in ic.receivers]
    )
    cfg = replace(cfg, variant=cfg.variant.svd_counterpart)
    start = len({r.wants for r in ic.receivers})
    outcome = sweep(pattern, start, pattern.fixed_base(), cfg)
    if outcome.r_star != unit_net.capacity_sum:
        return Unknown(outcome=outcome)
    code = make_index_code(outcome.m_star, outcome.r_star, pattern, cfg.epsilon)
    nc = extract_network_code(ic, code, unit_net)
    _verify_code(ic, code, nc, outcome.residual, cfg.seed)
    return nc


def _format_terms(terms: tuple[tuple[str, float], ...]) -> str:
    parts = []
    for sym, c in terms:
        if abs(c) <= 1e-9:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        term = sym if abs(mag - 1.0) <= 1e-9 else f"{mag:.6g}*{sym}"
        parts.append((sign, term))
    if not parts:
        return "0"
    first_sign, first_term = parts[0]
    out = ("-" if first_sign == "-" else "") + first_term
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


def format_network_code(nc: NetworkCode) -> str:
    """Human-readable code listing: one line per edge, one per demand."""
    lines = [f"linear network code over the reals (length {nc.r_star})"]
    for t, edge in enumerate(nc.unit_edges):
        lines.append(f"edge {edge.name}: Y = {_format_terms(nc.edge_coefficients[t])}")
    for dest, msg, terms in nc.decode_maps:
        lines.append(f"decode at {dest}: {msg} = {_format_terms(terms)}")
    for dest, msg in nc.trivial_demands:
        lines.append(f"decode at {dest}: {msg} = {msg} (sourced at {dest})")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# network file format: "node <name>", "edge <tail> <head> <capacity>",
# "source <msg> <node>", "demand <node> <msg>"; blank lines and #-comments
# are ignored.


def parse_network(text: str) -> NetworkSpec:
    nodes: list[str] = []
    edges: list[tuple[str, str, int]] = []
    sources: list[tuple[str, str]] = []
    demands: list[tuple[str, str]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind, args = tokens[0], tokens[1:]
        if kind == "node" and len(args) == 1:
            nodes.append(args[0])
        elif kind == "edge" and len(args) == 3:
            try:
                cap = int(args[2])
            except ValueError:
                raise ValueError(f"line {ln}: capacity {args[2]!r} is not an integer") from None
            edges.append((args[0], args[1], cap))
        elif kind == "source" and len(args) == 2:
            sources.append((args[0], args[1]))
        elif kind == "demand" and len(args) == 2:
            demands.append((args[0], args[1]))
        else:
            raise ValueError(f"line {ln}: unrecognized directive {raw.strip()!r}")
    return NetworkSpec(tuple(nodes), tuple(edges), tuple(sources), tuple(demands))


def format_network(net: NetworkSpec) -> str:
    lines = [f"node {v}" for v in net.nodes]
    lines += [f"edge {t} {h} {c}" for t, h, c in net.edges]
    lines += [f"source {m} {v}" for m, v in net.sources]
    lines += [f"demand {d} {m}" for d, m in net.demands]
    return "\n".join(lines) + "\n"


def load_network(path: str | Path) -> NetworkSpec:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def save_network(net: NetworkSpec, path: str | Path) -> None:
    Path(path).write_text(format_network(net), encoding="utf-8")
