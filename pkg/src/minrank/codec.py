"""From a completed matrix to a working broadcast code.

The completion's rows double as decoding vectors: pick r_star independent
rows as the encoder A, broadcast Y = A X, and let each user cancel what it
already caches.  Users whose own row was selected read their symbol off Y
directly; everyone else goes through the pseudoinverse of A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import SideInfoGraph
from .pattern import STAR, PatternMatrix
from .rankmin import numerical_rank

__all__ = [
    "DecodingError",
    "IndexCode",
    "MessageVector",
    "RankExtractionError",
    "SideInfoVector",
    "aggregate_error",
    "build_pattern_matrix",
    "decode",
    "decode_all",
    "encode",
    "error_bound",
    "extract_encoder",
    "make_index_code",
    "side_info_vector",
]


class RankExtractionError(RuntimeError):
    """Fewer independent rows than the requested encoder size."""


class DecodingError(RuntimeError):
    """A A^T is singular, so the pseudoinverse rule cannot be formed."""


def _vector(x, ctx: str) -> np.ndarray:
    out = np.asarray(x, dtype=np.float64)
    if out.ndim != 1:
        raise ValueError(f"{ctx}: expected a 1-d real vector")
    if not np.isfinite(out).all():
        raise ValueError(f"{ctx}: vector contains NaN or Inf")
    return out


@dataclass(frozen=True)
class MessageVector:
    """Real message vector with a declared entry bound."""

    x: np.ndarray
    x_max: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", _vector(self.x, "MessageVector"))
        self.x.setflags(write=False)
        if self.x_max <= 0:
            raise ValueError("x_max must be positive")
        if np.abs(self.x).max(initial=0.0) > self.x_max:
            raise ValueError("message entries exceed x_max")

    @property
    def n(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class SideInfoVector:
    """phi_i: the user's cached symbols placed at their positions, zero elsewhere."""

    phi: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "phi", _vector(self.phi, "SideInfoVector"))
        self.phi.setflags(write=False)


@dataclass(frozen=True)
class IndexCode:
    """A completion together with the encoder drawn from its rows.

    ``a`` holds the rows of ``m_star`` indexed by ``a_rows`` (1-indexed);
    ``epsilon`` is the tolerance the solver was asked to meet.
    """

    m_star: np.ndarray
    r_star: int
    a: np.ndarray
    a_rows: tuple[int, ...]
    pattern: PatternMatrix
    epsilon: float

    def __post_init__(self) -> None:
        if self.m_star.shape != self.pattern.shape:
            raise ValueError("m_star shape does not match the pattern")
        if self.a.shape != (self.r_star, self.m_star.shape[1]):
            raise ValueError("encoder must be r_star x n")
        if len(self.a_rows) != self.r_star:
            raise ValueError("a_rows must list one source row per encoder row")
        if numerical_rank(self.a) != self.r_star:
            raise ValueError("encoder rows are not full row rank")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    @property
    def n(self) -> int:
        return self.m_star.shape[1]


def build_pattern_matrix(g: SideInfoGraph) -> PatternMatrix:
    """Square pattern of g: ONE on the diagonal, STAR at every edge."""
    return PatternMatrix.from_graph(g)


def _select_rows(m: np.ndarray, r: int, theta: float) -> list[int]:
    # greedy first-to-last scan; keep a row when its component orthogonal
    # to the rows already kept exceeds theta relative to its own norm
    basis: list[np.ndarray] = []
    rows: list[int] = []
    for i, row in enumerate(m):
        nrm = float(np.linalg.norm(row))
        if nrm <= 1e-300:
            continue
        v = row.astype(np.float64, copy=True)
        for _ in range(2):
            for b in basis:
                v -= (v @ b) * b
        res = float(np.linalg.norm(v))
        if res > theta * nrm:
            basis.append(v / res)
            rows.append(i)
            if len(rows) == r:
                break
    return rows


def _select_rows_pivoted(m: np.ndarray, r: int) -> list[int]:
    # greedy pivoting: repeatedly take the row with the largest component
    # orthogonal to the rows already taken (earliest row wins ties), so the
    # selection stays well conditioned even when the leading rows are nearly
    # dependent as a set despite each clearing a per-row threshold
    work = m.astype(np.float64, copy=True)
    scale = float(np.linalg.norm(work, axis=1).max(initial=0.0))
    rows: list[int] = []
    for _ in range(r):
        res = np.linalg.norm(work, axis=1)
        i = int(np.argmax(res))
        # below this floor no additional row can lift the subset past the
        # full-row-rank check, so stop and report a short selection instead
        if res[i] <= 1e-9 * scale:
            break
        rows.append(i)
        b = work[i] / res[i]
        for _ in range(2):
            work -= np.outer(work @ b, b)
    return sorted(rows)


def _encoder_rows(m_star: np.ndarray, r_star: int) -> tuple[np.ndarray, list[int]]:
    m_star = np.asarray(m_star, dtype=np.float64)
    if m_star.ndim != 2:
        raise ValueError("m_star must be a matrix")
    if not (1 <= r_star <= m_star.shape[0]):
        raise ValueError(f"r_star {r_star} out of range 1..{m_star.shape[0]}")
    # solver output has exact rank <= r_star; the loose 1e-3 tolerance also
    # admits externally rounded completions whose trailing singular values
    # are display noise, while still catching a grossly understated r_star
    if numerical_rank(m_star, rank_tolerance=1e-3) > r_star:
        raise ValueError("m_star has rank above r_star; encoder would not span it")
    rows = _select_rows(m_star, r_star, 1e-3)
    if len(rows) < r_star or numerical_rank(m_star[rows]) < r_star:
        rows = _select_rows_pivoted(m_star, r_star)
    if len(rows) < r_star:
        raise RankExtractionError(
            f"found only {len(rows)} independent rows, needed {r_star}"
        )
    if numerical_rank(m_star[rows]) < r_star:
        raise RankExtractionError(
            f"every {r_star}-row selection is numerically rank deficient"
        )
    return m_star, rows


def extract_encoder(m_star: np.ndarray, r_star: int) -> np.ndarray:
    """Select r_star independent rows of m_star, preferring the earliest ones.

    A row joins the selection only when it is meaningfully independent of
    the rows already chosen (relative threshold 1e-3), so nearly dependent
    leading rows are skipped in favor of later ones.  If the rows that pass
    the scan are still nearly dependent as a set, the selection is redone
    by greedy pivoting on the largest orthogonal residual, which trades the
    earliest-row preference for a well-conditioned encoder.
    """
    m_star, rows = _encoder_rows(m_star, r_star)
    return m_star[rows]


def make_index_code(
    m_star: np.ndarray, r_star: int, pattern: PatternMatrix, epsilon: float
) -> IndexCode:
    """Bundle a completion with its extracted encoder."""
    m_star, rows = _encoder_rows(m_star, r_star)
    return IndexCode(
        m_star=m_star,
        r_star=r_star,
        a=m_star[rows],
        a_rows=tuple(i + 1 for i in rows),
        pattern=pattern,
        epsilon=epsilon,
    )


def encode(a: np.ndarray, x: MessageVector | np.ndarray) -> np.ndarray:
    """Broadcast vector Y = A X."""
    x_vec = x.x if isinstance(x, MessageVector) else _vector(x, "encode")
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] != x_vec.size:
        raise ValueError(f"encoder {a.shape} does not match message length {x_vec.size}")
    return a @ x_vec


def _pseudo_inverse(a: np.ndarray) -> np.ndarray:
    # A^T (A A^T)^-1 per the decoding rule; fall back to a pivoted
    # factorization when the normal equations are badly conditioned
    gram = a @ a.T
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond):
        raise DecodingError("A A^T is singular; encoder rows are dependent")
    if cond > 1e12:
        return np.linalg.pinv(a)
    return a.T @ np.linalg.inv(gram)


def side_info_vector(
    code: IndexCode, x: MessageVector | np.ndarray, user: int
) -> SideInfoVector:
    """phi for ``user``: x restricted to the STAR cells of the user's row."""
    x_vec = x.x if isinstance(x, MessageVector) else _vector(x, "side_info_vector")
    if x_vec.size != code.n:
        raise ValueError("message length does not match the code")
    if not (1 <= user <= code.pattern.shape[0]):
        raise ValueError(f"user {user} out of range")
    mask = code.pattern.codes[user - 1] == STAR
    return SideInfoVector(np.where(mask, x_vec, 0.0))


def decode(
    code: IndexCode,
    g: SideInfoGraph,
    y: np.ndarray,
    user: int,
    phi: SideInfoVector | np.ndarray,
) -> float:
    """Recover X_user from the broadcast y and the user's side information.

    Users whose row was selected into the encoder read their broadcast
    coordinate directly; everyone else projects through A^T (A A^T)^-1.
    """
    if not (1 <= user <= g.n):
        raise ValueError(f"user {user} out of range 1..{g.n}")
    y_vec = _vector(y, "decode")
    if y_vec.size != code.r_star:
        raise ValueError("broadcast length does not match r_star")
    phi_vec = phi.phi if isinstance(phi, SideInfoVector) else _vector(phi, "decode")
    if phi_vec.size != code.n:
        raise ValueError("phi length does not match the code")
    cached = set(g.out_neighbors(user))
    support = np.flatnonzero(phi_vec != 0.0) + 1
    if not set(support.tolist()) <= cached:
        raise ValueError("phi carries symbols the user does not cache")
    m_i = code.m_star[user - 1]
    if user in code.a_rows:
        return float(y_vec[code.a_rows.index(user)] - m_i @ phi_vec)
    return float(m_i @ (_pseudo_inverse(code.a) @ y_vec) - m_i @ phi_vec)


def decode_all(
    code: IndexCode, g: SideInfoGraph, y: np.ndarray, x: MessageVector | np.ndarray
) -> np.ndarray:
    """Decode every user with pattern-derived side information."""
    return np.array(
        [decode(code, g, y, i, side_info_vector(code, x, i)) for i in range(1, g.n + 1)]
    )


def error_bound(epsilon: float, x_max: float, n: int) -> float:
    """Worst-case aggregate decoding error: epsilon * x_max * sqrt(n)."""
    if epsilon < 0 or x_max < 0:
        raise ValueError("epsilon and x_max must be non-negative")
    if n < 1:
        raise ValueError("n must be at least 1")
    return epsilon * x_max * float(np.sqrt(n))


def aggregate_error(x: MessageVector | np.ndarray, x_hat: np.ndarray) -> float:
    """Euclidean norm of x - x_hat."""
    x_vec = x.x if isinstance(x, MessageVector) else _vector(x, "aggregate_error")
    h_vec = _vector(x_hat, "aggregate_error")
    if x_vec.size != h_vec.size:
        raise ValueError("vectors differ in length")
    return float(np.linalg.norm(x_vec - h_vec))
