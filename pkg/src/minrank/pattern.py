"""Symbolic pattern matrices: the cell classification driving completion solvers.

A pattern cell is ONE (a fixed 1: wanted message, diagonal in the square
case), STAR (free: cached side information), or ZERO (a fixed 0).  Square
patterns come from side information graphs; rectangular ones from
wants/has receiver lists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import SideInfoGraph

__all__ = ["ZERO", "ONE", "STAR", "PatternMatrix"]

ZERO = 0
ONE = 1
STAR = 2


@dataclass(frozen=True)
class PatternMatrix:
    """Cell classification over {ZERO, ONE, STAR} as an int8 array."""

    codes: np.ndarray

    def __post_init__(self) -> None:
        codes = np.asarray(self.codes, dtype=np.int8)
        if codes.ndim != 2:
            raise ValueError("pattern must be a 2-d array")
        if not np.isin(codes, (ZERO, ONE, STAR)).all():
            raise ValueError("pattern cells must be ZERO, ONE or STAR")
        object.__setattr__(self, "codes", codes)
        codes.setflags(write=False)

    @classmethod
    def from_graph(cls, g: SideInfoGraph) -> "PatternMatrix":
        """Square pattern: diagonal ONE, STAR at every edge, ZERO elsewhere."""
        codes = np.full((g.n, g.n), ZERO, dtype=np.int8)
        np.fill_diagonal(codes, ONE)
        for i, j in g.edges:
            codes[i - 1, j - 1] = STAR
        return cls(codes)

    @classmethod
    def from_receivers(
        cls, n_messages: int, receivers: list[tuple[int, frozenset[int]]]
    ) -> "PatternMatrix":
        """Rectangular pattern, one row per receiver.

        Each receiver is (wanted message index, has-set of message indices),
        0-indexed.  ONE sits at the wanted column, STAR at has columns; a
        want inside its own has-set is rejected (such receivers are already
        satisfied and must be dropped by the caller).
        """
        codes = np.full((len(receivers), n_messages), ZERO, dtype=np.int8)
        for row, (want, has) in enumerate(receivers):
            if want in has:
                raise ValueError(f"receiver {row} already has its wanted message {want}")
            codes[row, sorted(has)] = STAR
            codes[row, want] = ONE
        return cls(codes)

    @property
    def shape(self) -> tuple[int, int]:
        return self.codes.shape

    @property
    def n(self) -> int:
        rows, cols = self.codes.shape
        if rows != cols:
            raise ValueError("pattern is not square")
        return rows

    @property
    def is_square(self) -> bool:
        rows, cols = self.codes.shape
        return rows == cols

    @property
    def is_symmetric(self) -> bool:
        return self.is_square and bool((self.codes == self.codes.T).all())

    @property
    def star_mask(self) -> np.ndarray:
        return self.codes == STAR

    @property
    def one_mask(self) -> np.ndarray:
        return self.codes == ONE

    @property
    def zero_mask(self) -> np.ndarray:
        return self.codes == ZERO

    def fixed_base(self) -> np.ndarray:
        """Float matrix with the fixed values: 1 at ONE cells, 0 elsewhere."""
        return (self.codes == ONE).astype(np.float64)
