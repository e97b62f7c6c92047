"""Combinatorial baselines: greedy clique covers and least-difference row merging.

Both produce binary (0/1-coefficient) index codes and serve as the upper
anchors that the rank-minimization solvers try to beat.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import GraphKind, SideInfoGraph, complement
from .pattern import ONE, STAR, ZERO, PatternMatrix

__all__ = ["CliqueCover", "LdgMatrix", "greedy_clique_cover", "greedy_coloring_number", "ldg"]


@dataclass(frozen=True)
class CliqueCover:
    """Disjoint cliques partitioning {1..n}; one broadcast symbol per clique."""

    cliques: tuple[tuple[int, ...], ...]

    @property
    def number(self) -> int:
        return len(self.cliques)


@dataclass(frozen=True)
class LdgMatrix:
    """Surviving symbolic rows after least-difference merging.

    ``rows`` is a k x n int8 array over {ZERO, ONE, STAR}; ``origins[k]``
    is the set of original users merged into row k.  Each row's coded
    message is the sum of the messages at its ONE positions.
    """

    rows: np.ndarray
    origins: tuple[frozenset[int], ...]

    @property
    def code_length(self) -> int:
        return self.rows.shape[0]

    def transmissions(self) -> tuple[tuple[int, ...], ...]:
        """1-indexed ONE positions per surviving row."""
        return tuple(
            tuple(int(j) + 1 for j in np.flatnonzero(row == ONE)) for row in self.rows
        )


def _greedy_color_classes(g: SideInfoGraph) -> list[list[int]]:
    """Sequential greedy coloring of the complement of g.

    Vertices are colored in index order 1..n with the smallest free
    color.  Color classes of the complement are cliques of g.
    """
    if g.kind is not GraphKind.UNDIRECTED:
        raise ValueError("greedy coloring requires an UNDIRECTED graph")
    comp = complement(g)
    color: dict[int, int] = {}
    for v in range(1, g.n + 1):
        taken = {color[u] for u in comp.out_neighbors(v) if u in color}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    n_colors = max(color.values()) + 1
    classes: list[list[int]] = [[] for _ in range(n_colors)]
    for v in sorted(color):
        classes[color[v]].append(v)
    return classes


def greedy_coloring_number(g: SideInfoGraph) -> int:
    """Number of colors the greedy heuristic spends on the complement of g."""
    return len(_greedy_color_classes(g))


def greedy_clique_cover(g: SideInfoGraph) -> CliqueCover:
    """Greedy coloring's color classes mapped back to cliques of g."""
    classes = _greedy_color_classes(g)
    cliques = tuple(sorted(tuple(sorted(c)) for c in classes))
    return CliqueCover(cliques)


def _mergeable(a: np.ndarray, b: np.ndarray) -> bool:
    # merging is blocked only by an explicit 0/1 disagreement in some column
    return not (((a == ONE) & (b == ZERO)) | ((a == ZERO) & (b == ONE))).any()


def ldg(pattern: PatternMatrix, seed: int | None = None) -> LdgMatrix:
    """Least-difference greedy merging of pattern rows.

    Repeatedly merges row i with later rows while any is mergeable
    (no column with 0 against 1); merged cells follow *+*=*, 1+*=1,
    0+*=0.  Rows are scanned in index order; with ``seed`` set, the
    mergeable partner is drawn uniformly instead, reproducing the
    randomized flavor of the construction.
    """
    codes = pattern.codes
    if not pattern.is_square or not (np.diagonal(codes) == ONE).all():
        raise ValueError("ldg expects a square pattern with ONE on the diagonal")
    rng = np.random.default_rng(seed) if seed is not None else None
    rows = [codes[i].copy() for i in range(codes.shape[0])]
    origins = [{i + 1} for i in range(codes.shape[0])]
    i = 0
    while i < len(rows):
        merged = True
        while merged:
            merged = False
            candidates = [j for j in range(i + 1, len(rows)) if _mergeable(rows[i], rows[j])]
            if candidates:
                j = candidates[0] if rng is None else int(rng.choice(candidates))
                a, b = rows[i], rows[j]
                rows[i] = np.where(a != STAR, a, b)
                origins[i] |= origins[j]
                del rows[j]
                del origins[j]
                merged = True
        i += 1
    return LdgMatrix(np.array(rows, dtype=np.int8), tuple(frozenset(o) for o in origins))
