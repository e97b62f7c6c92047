"""Side information graphs: construction, random families, and exact small-case oracles.

Vertices are the users/messages 1..n.  A directed edge (i, j) means user i
already caches message j.  Undirected graphs are stored with both
orientations present so that directed and undirected code paths share one
edge representation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Edge",
    "GraphKind",
    "SideInfoGraph",
    "complement",
    "exact_clique_cover",
    "gen_directed_er",
    "gen_directed_regular",
    "gen_three_clique_coverable",
    "gen_undirected_er",
    "independence_number",
    "load_graph",
    "loads_graph",
    "save_graph",
    "dumps_graph",
    "undirected_subgraph",
]

Edge = tuple[int, int]


class GraphKind(enum.Enum):
    UNDIRECTED = "UNDIRECTED"
    DIRECTED = "DIRECTED"


@dataclass(frozen=True)
class SideInfoGraph:
    """Immutable side information graph on vertices 1..n.

    Parameters
    ----------
    n : int
        Number of vertices (users).
    edges : frozenset of (int, int)
        Ordered pairs (i, j), 1-indexed, no self-loops.  For UNDIRECTED
        graphs both orientations of every edge must be present.
    kind : GraphKind
    """

    n: int
    edges: frozenset[Edge]
    kind: GraphKind

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop ({i},{j}) not allowed")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge ({i},{j}) out of range 1..{self.n}")
        if self.kind is GraphKind.UNDIRECTED:
            for i, j in self.edges:
                if (j, i) not in self.edges:
                    raise ValueError(f"undirected graph missing reverse of ({i},{j})")

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in self.edges

    def out_neighbors(self, i: int) -> tuple[int, ...]:
        """Cached messages of user i (the set H_i), ascending."""
        return tuple(sorted(j for (a, j) in self.edges if a == i))

    def adjacency(self) -> np.ndarray:
        """0/1 adjacency matrix, row i = out-edges of vertex i+1."""
        a = np.zeros((self.n, self.n), dtype=np.int8)
        for i, j in self.edges:
            a[i - 1, j - 1] = 1
        return a

    @property
    def undirected_edge_count(self) -> int:
        """Number of unordered edges (only meaningful for UNDIRECTED graphs)."""
        return len(self.edges) // 2


def _undirected_from_pairs(n: int, pairs: set[tuple[int, int]]) -> SideInfoGraph:
    edges = set()
    for i, j in pairs:
        edges.add((i, j))
        edges.add((j, i))
    return SideInfoGraph(n, frozenset(edges), GraphKind.UNDIRECTED)


def _check_prob(p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0,1], got {p}")


def gen_undirected_er(n: int, p: float, seed: int) -> SideInfoGraph:
    """Erdos-Renyi G(n, p): each unordered pair drawn independently.

    Deterministic for a fixed (n, p, seed); pairs are drawn in ascending
    (i, j) order so the stream layout is part of the format.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_prob(p)
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    pairs = {(int(a) + 1, int(b) + 1) for a, b in zip(iu[keep], ju[keep])}
    return _undirected_from_pairs(n, pairs)


def gen_directed_er(n: int, p: float, seed: int) -> SideInfoGraph:
    """Directed Erdos-Renyi: each ordered pair (i, j), i != j, independently."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    _check_prob(p)
    rng = np.random.default_rng(seed)
    draws = rng.random((n, n))
    np.fill_diagonal(draws, 1.0)  # never below p on the diagonal
    rows, cols = np.where(draws < p)
    edges = frozenset((int(i) + 1, int(j) + 1) for i, j in zip(rows, cols))
    return SideInfoGraph(n, edges, GraphKind.DIRECTED)


def gen_directed_regular(n: int, c: int, seed: int) -> SideInfoGraph:
    """Every user caches exactly c messages chosen uniformly without replacement."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if c < 0 or c > n - 1:
        raise ValueError(f"cache size c must lie in [0, n-1], got c={c} for n={n}")
    rng = np.random.default_rng(seed)
    edges = set()
    for i in range(1, n + 1):
        others = np.array([j for j in range(1, n + 1) if j != i])
        picks = rng.choice(others, size=c, replace=False)
        for j in picks:
            edges.add((i, int(j)))
    return SideInfoGraph(n, frozenset(edges), GraphKind.DIRECTED)


def gen_three_clique_coverable(
    n: int, p: float, seed: int, return_groups: bool = False
):
    """Random undirected graph partitioned into three cliques plus noise edges.

    Each vertex joins one of three groups uniformly at random (assignment
    redrawn until no group is empty).  Groups become complete cliques;
    every inter-group pair is added independently with probability p.  The
    partition certifies clique cover number <= 3.

    With ``return_groups`` the group tuple (three vertex tuples) is returned
    alongside the graph.
    """
    if n < 3:
        raise ValueError(f"n must be >= 3 to fill three groups, got {n}")
    _check_prob(p)
    rng = np.random.default_rng(seed)
    while True:
        assign = rng.integers(0, 3, size=n)
        if all((assign == g).any() for g in range(3)):
            break
    pairs = set()
    iu, ju = np.triu_indices(n, k=1)
    draws = rng.random(iu.size)
    for a, b, d in zip(iu, ju, draws):
        i, j = int(a) + 1, int(b) + 1
        if assign[a] == assign[b] or d < p:
            pairs.add((i, j))
    g = _undirected_from_pairs(n, pairs)
    if return_groups:
        groups = tuple(
            tuple(int(v) + 1 for v in np.flatnonzero(assign == k)) for k in range(3)
        )
        return g, groups
    return g


def undirected_subgraph(g: SideInfoGraph) -> SideInfoGraph:
    """Maximal undirected subgraph: keep only bidirected pairs."""
    if g.kind is GraphKind.UNDIRECTED:
        return g
    edges = frozenset(e for e in g.edges if (e[1], e[0]) in g.edges)
    return SideInfoGraph(g.n, edges, GraphKind.UNDIRECTED)


def complement(g: SideInfoGraph) -> SideInfoGraph:
    """Complement within the same kind; never introduces self-loops."""
    edges = frozenset(
        (i, j)
        for i in range(1, g.n + 1)
        for j in range(1, g.n + 1)
        if i != j and (i, j) not in g.edges
    )
    return SideInfoGraph(g.n, edges, g.kind)


def _require_undirected(g: SideInfoGraph, op: str) -> None:
    if g.kind is not GraphKind.UNDIRECTED:
        raise ValueError(f"{op} requires an UNDIRECTED graph")


def _adjacency_masks(g: SideInfoGraph) -> list[int]:
    adj = [0] * g.n
    for i, j in g.edges:
        adj[i - 1] |= 1 << (j - 1)
    return adj


def independence_number(g: SideInfoGraph) -> int:
    """Exact independence number by branch and bound over vertex bitmasks.

    Exhaustive and therefore guarded to n <= 30.
    """
    _require_undirected(g, "independence_number")
    if g.n > 30:
        raise ValueError(f"independence_number is exact-only, limited to n <= 30 (got {g.n})")
    adj = _adjacency_masks(g)
    n = g.n
    best = 0

    def expand(cand: int, size: int) -> None:
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if cand == 0:
            best = max(best, size)
            return
        # branch on the highest-degree candidate; including it shrinks cand fastest
        v, vdeg = -1, -1
        m = cand
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            d = (adj[u] & cand).bit_count()
            if d > vdeg:
                v, vdeg = u, d
        expand(cand & ~adj[v] & ~(1 << v), size + 1)
        expand(cand & ~(1 << v), size)

    expand((1 << n) - 1, 0)
    return best


def _independent_subsets_with_lowest(s: int, adj: list[int]):
    """Yield every independent subset of bitmask s containing its lowest vertex."""
    v = (s & -s).bit_length() - 1
    start = 1 << v
    stack = [(start, s & ~start & ~adj[v])]
    while stack:
        cur, cand = stack.pop()
        yield cur
        m = cand
        while m:
            u = (m & -m).bit_length() - 1
            m &= m - 1
            stack.append((cur | (1 << u), m & ~adj[u]))


def exact_clique_cover(g: SideInfoGraph) -> int:
    """Exact clique cover number = chromatic number of the complement.

    Subset dynamic program; exhaustive, guarded to n <= 12.
    """
    _require_undirected(g, "exact_clique_cover")
    if g.n > 12:
        raise ValueError(f"exact_clique_cover is exact-only, limited to n <= 12 (got {g.n})")
    comp = complement(g)
    adj = _adjacency_masks(comp)
    memo: dict[int, int] = {0: 0}

    def chi(s: int) -> int:
        if s in memo:
            return memo[s]
        best = g.n
        for ind in _independent_subsets_with_lowest(s, adj):
            best = min(best, 1 + chi(s & ~ind))
            if best == 1:
                break
        memo[s] = best
        return best

    return chi((1 << g.n) - 1)


# ---------------------------------------------------------------------------
# file format: first line "n <vertex-count> <UNDIRECTED|DIRECTED>", then one
# "i j" edge per line.  Canonical form lists undirected edges once (i < j)
# and sorts lexicographically; writing is always canonical so canonical
# files round-trip byte-identically.


def dumps_graph(g: SideInfoGraph) -> str:
    if g.kind is GraphKind.UNDIRECTED:
        lines = sorted((i, j) for (i, j) in g.edges if i < j)
    else:
        lines = sorted(g.edges)
    body = "".join(f"{i} {j}\n" for i, j in lines)
    return f"n {g.n} {g.kind.value}\n{body}"


def save_graph(g: SideInfoGraph, path: str | Path) -> None:
    Path(path).write_text(dumps_graph(g), encoding="utf-8")


def loads_graph(text: str) -> SideInfoGraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty graph file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "n":
        raise ValueError(f"bad header line: {lines[0]!r}")
    try:
        n = int(head[1])
    except ValueError:
        raise ValueError(f"bad vertex count: {head[1]!r}") from None
    try:
        kind = GraphKind(head[2])
    except ValueError:
        raise ValueError(f"bad graph kind: {head[2]!r}") from None
    edges: set[Edge] = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {ln!r}")
        i, j = int(parts[0]), int(parts[1])
        edges.add((i, j))
        if kind is GraphKind.UNDIRECTED:
            edges.add((j, i))
    return SideInfoGraph(n, frozenset(edges), kind)


def load_graph(path: str | Path) -> SideInfoGraph:
    return loads_graph(Path(path).read_text(encoding="utf-8"))
