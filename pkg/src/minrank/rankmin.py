"""Rank-minimizing completion solvers over pattern matrices.

Three families, all alternating between the fixed-entry region D
(ones at ONE cells, zeros at ZERO cells, free at STAR cells) and a
low-rank region:

* AP      — alternating projections onto PSD-rank-r (eigendecomposition)
            or plain rank-r (truncated SVD) and back onto D;
* DirAP   — AP with an extrapolated step along the D-side secant each
            macro-cycle;
* AltMin  — explicit factorization M = E F^T, alternating least squares
            against the fixed entries.

`solve` wraps any of them in the rank sweep: start at the greedy clique
cover size and decrement the target rank while attempts keep succeeding.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coloring import greedy_clique_cover
from .graph import SideInfoGraph, undirected_subgraph
from .pattern import ONE, STAR, ZERO, PatternMatrix

__all__ = [
    "AttemptRecord",
    "PatternMatrix",
    "SolverConfig",
    "SolverOutcome",
    "Variant",
    "ap_attempt",
    "altmin_attempt",
    "dirap_attempt",
    "dump_matrix",
    "dumps_matrix",
    "load_matrix",
    "loads_matrix",
    "nuclear_norm_floor_check",
    "numerical_rank",
    "project_C_svd",
    "project_Cprime",
    "project_D",
    "solve",
    "spectral_norm",
    "sweep",
]

# A failing rank attempt is abandoned once the best residual seen stops
# improving by a relative _STALL_RTOL over a _STALL_WINDOW-cycle window;
# runs converging at any practical linear rate clear this easily.
_STALL_WINDOW = 200
_STALL_RTOL = 1e-4


class Variant(enum.Enum):
    AP_EIG = "AP_EIG"
    AP_SVD = "AP_SVD"
    DIRAP_EIG = "DIRAP_EIG"
    DIRAP_SVD = "DIRAP_SVD"
    ALTMIN = "ALTMIN"

    @property
    def uses_eig(self) -> bool:
        return self.name.endswith("EIG")

    @property
    def svd_counterpart(self) -> "Variant":
        if self is Variant.AP_EIG:
            return Variant.AP_SVD
        if self is Variant.DIRAP_EIG:
            return Variant.DIRAP_SVD
        return self


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 0.001
    max_iters: int = 10000
    restarts: int = 3
    variant: Variant = Variant.AP_EIG
    rank_tolerance: float = 1e-6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.rank_tolerance <= 0:
            raise ValueError("rank_tolerance must be > 0")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass(frozen=True)
class AttemptRecord:
    """One (rank, restart) run of an attempt loop."""

    rank: int
    restart: int
    iterations: int
    residual: float
    success: bool
    pinv_fallback: bool = False


@dataclass(frozen=True)
class SolverOutcome:
    m_star: np.ndarray
    r_star: int
    residual: float
    iterations: int
    wall_time_s: float
    attempts: tuple[AttemptRecord, ...]


def _as_real_matrix(m: np.ndarray, ctx: str) -> np.ndarray:
    out = np.asarray(m, dtype=np.float64)
    if out.ndim != 2:
        raise ValueError(f"{ctx}: expected a 2-d real matrix")
    if not np.isfinite(out).all():
        raise ValueError(f"{ctx}: matrix contains NaN or Inf")
    return out


def spectral_norm(m: np.ndarray) -> float:
    """Largest singular value; 0.0 for empty matrices."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.svd(m, compute_uv=False)[0])


def project_D(m: np.ndarray, pattern: PatternMatrix) -> np.ndarray:
    """Nearest matrix agreeing with the pattern's fixed cells (Frobenius)."""
    m = _as_real_matrix(m, "project_D")
    if m.shape != pattern.shape:
        raise ValueError(f"shape mismatch: matrix {m.shape} vs pattern {pattern.shape}")
    return np.where(pattern.star_mask, m, pattern.fixed_base())


def _sym(m: np.ndarray) -> np.ndarray:
    if np.abs(m - m.T).max(initial=0.0) > 1e-12:
        return 0.5 * (m + m.T)
    return m


def _cprime(m: np.ndarray, r: int) -> np.ndarray:
    w, v = np.linalg.eigh(_sym(m))
    w = np.clip(w[-r:], 0.0, None)
    vecs = v[:, -r:]
    return (vecs * w) @ vecs.T


def _csvd(m: np.ndarray, r: int) -> np.ndarray:
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    return (u[:, :r] * s[:r]) @ vt[:r]


def project_Cprime(m: np.ndarray, r: int) -> np.ndarray:
    """Frobenius-nearest PSD matrix of rank <= r (for symmetric input).

    Eigendecomposes, clamps negative eigenvalues to zero, keeps the r
    largest.  Input drifting from symmetry by more than 1e-12 is
    symmetrized first.
    """
    m = _as_real_matrix(m, "project_Cprime")
    n_rows, n_cols = m.shape
    if n_rows != n_cols:
        raise ValueError("project_Cprime requires a square matrix")
    if not (1 <= r <= n_rows):
        raise ValueError(f"rank target {r} out of range 1..{n_rows}")
    return _cprime(m, r)


def project_C_svd(m: np.ndarray, r: int) -> np.ndarray:
    """Best rank-<=r approximation by truncated SVD (Eckart-Young)."""
    m = _as_real_matrix(m, "project_C_svd")
    if not (1 <= r <= min(m.shape)):
        raise ValueError(f"rank target {r} out of range 1..{min(m.shape)}")
    return _csvd(m, r)


def numerical_rank(m: np.ndarray, rank_tolerance: float = 1e-6) -> int:
    """Count of singular values above rank_tolerance x the largest one."""
    m = _as_real_matrix(m, "numerical_rank")
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int((s > rank_tolerance * s[0]).sum())


def nuclear_norm_floor_check(m: np.ndarray, pattern: PatternMatrix) -> bool:
    """True iff the nuclear norm of a D-feasible m reaches n - 1e-6.

    Every D-feasible completion has trace n, so its nuclear norm cannot
    drop below n: nuclear-norm surrogates are useless for this pattern
    family.  Raises if m is not in D for the pattern.
    """
    m = _as_real_matrix(m, "nuclear_norm_floor_check")
    n = pattern.n
    if m.shape != pattern.shape:
        raise ValueError("shape mismatch")
    if np.abs(m[pattern.one_mask] - 1.0).max(initial=0.0) > 1e-9:
        raise ValueError("matrix is not in D: ONE cells deviate from 1")
    if np.abs(m[pattern.zero_mask]).max(initial=0.0) > 1e-9:
        raise ValueError("matrix is not in D: ZERO cells deviate from 0")
    nuclear = float(np.linalg.svd(m, compute_uv=False).sum())
    return nuclear >= n - 1e-6


def _rng_for_attempt(cfg: SolverConfig, rank: int, restart: int) -> np.random.Generator:
    # independent, reproducible stream per (seed, rank, restart)
    return np.random.default_rng([cfg.seed, rank, restart])


def _validate_attempt_inputs(pattern: PatternMatrix, r: int, use_eig: bool) -> None:
    n_rows, n_cols = pattern.shape
    if not (1 <= r <= min(n_rows, n_cols)):
        raise ValueError(f"rank target {r} out of range 1..{min(n_rows, n_cols)}")
    if use_eig and not pattern.is_symmetric:
        raise ValueError("EIG variants require a square symmetric pattern")


class _StallTracker:
    """Detects a plateau of the best-so-far residual."""

    def __init__(self) -> None:
        self.best_history: list[float] = []

    def stalled(self, residual: float) -> bool:
        best = min(residual, self.best_history[-1]) if self.best_history else residual
        self.best_history.append(best)
        if len(self.best_history) <= _STALL_WINDOW:
            return False
        prev = self.best_history[-1 - _STALL_WINDOW]
        return prev - best < _STALL_RTOL * prev


def _projection_run(
    pattern: PatternMatrix,
    r: int,
    cfg: SolverConfig,
    rng: np.random.Generator,
    use_eig: bool,
    directional: bool,
) -> tuple[np.ndarray | None, float, int]:
    """One restart of AP or DirAP; returns (matrix or None, residual, cycles)."""
    base = pattern.fixed_base()
    star = pattern.star_mask
    n_rows, n_cols = pattern.shape

    def pd(m: np.ndarray) -> np.ndarray:
        out = np.where(star, m, base)
        return _sym(out) if use_eig else out

    def pc(m: np.ndarray) -> np.ndarray:
        return _cprime(m, r) if use_eig else _csvd(m, r)

    b = rng.standard_normal((n_rows, r))
    if use_eig:
        point = b @ b.T
    else:
        point = b @ rng.standard_normal((n_cols, r)).T

    stall = _StallTracker()
    res = np.inf
    for cycle in range(1, cfg.max_iters + 1):
        try:
            d = pd(point)
            c = pc(d)
            d_next = pd(c)
        except np.linalg.LinAlgError:
            # a diverged iterate broke the factorization; restart failed
            return None, res, cycle
        res = spectral_norm(d_next - c)
        if res <= cfg.epsilon:
            return c, res, cycle
        if stall.stalled(res):
            return None, res, cycle
        if directional:
            diff = d_next - d
            den = float(np.tensordot(-diff, d - c))
            if abs(den) < 1e-12:
                point = d_next
            else:
                lam = float(((d - c) ** 2).sum()) / den
                # a nearly-degenerate secant makes lam explode and can run
                # the iterate (and the eigensolver) off the rails; the plain
                # step is always safe
                if not np.isfinite(lam) or abs(lam) > 1e3:
                    point = d_next
                else:
                    point = d + lam * diff
        else:
            point = d_next
    return None, res, cfg.max_iters


def _altmin_run(
    pattern: PatternMatrix, r: int, cfg: SolverConfig, rng: np.random.Generator
) -> tuple[np.ndarray | None, float, int, bool]:
    """One AltMin restart; returns (matrix or None, fixed-entry residual, iters, pinv flag)."""
    n_rows, n_cols = pattern.shape
    fixed = ~pattern.star_mask
    target = pattern.fixed_base()
    col_rows = [np.flatnonzero(fixed[:, j]) for j in range(n_cols)]
    row_cols = [np.flatnonzero(fixed[i, :]) for i in range(n_rows)]

    e_fac = rng.standard_normal((n_rows, r))
    f_fac = np.zeros((n_cols, r))
    pinv_used = False
    e_prev: float | None = None
    for it in range(1, cfg.max_iters + 1):
        for j in range(n_cols):
            rows = col_rows[j]
            if rows.size == 0:
                f_fac[j] = 0.0
                continue
            sol, _, rank_, _ = np.linalg.lstsq(e_fac[rows], target[rows, j], rcond=None)
            if rank_ < min(rows.size, r):
                pinv_used = True
            f_fac[j] = sol
        for i in range(n_rows):
            cols = row_cols[i]
            if cols.size == 0:
                e_fac[i] = 0.0
                continue
            sol, _, rank_, _ = np.linalg.lstsq(f_fac[cols], target[i, cols], rcond=None)
            if rank_ < min(cols.size, r):
                pinv_used = True
            e_fac[i] = sol
        m = e_fac @ f_fac.T
        e_i = float(np.sqrt(((m - target)[fixed] ** 2).sum()))
        if e_i <= cfg.epsilon:
            return m, e_i, it, pinv_used
        if e_prev is not None and abs(e_i - e_prev) <= cfg.epsilon:
            return None, e_i, it, pinv_used
        e_prev = e_i
    return None, e_i, cfg.max_iters, pinv_used


def _run_attempt(
    pattern: PatternMatrix, r: int, cfg: SolverConfig, kind: str
) -> tuple[np.ndarray | None, float, int, list[AttemptRecord]]:
    """All restarts of one rank target; returns the first success."""
    use_eig = cfg.variant.uses_eig and kind != "altmin"
    _validate_attempt_inputs(pattern, r, use_eig)
    records: list[AttemptRecord] = []
    total_cycles = 0
    for restart in range(cfg.restarts):
        rng = _rng_for_attempt(cfg, r, restart)
        pinv_used = False
        if kind == "altmin":
            m, res, cycles, pinv_used = _altmin_run(pattern, r, cfg, rng)
            if m is not None:
                # report the cross-variant spectral residual of the final point
                res = spectral_norm(project_D(m, pattern) - m)
        else:
            m, res, cycles = _projection_run(
                pattern, r, cfg, rng, use_eig, directional=(kind == "dirap")
            )
        total_cycles += cycles
        records.append(AttemptRecord(r, restart, cycles, res, m is not None, pinv_used))
        if m is not None:
            return m, res, total_cycles, records
    return None, res, total_cycles, records


def _attempt_outcome(
    pattern: PatternMatrix, r: int, cfg: SolverConfig, kind: str
) -> SolverOutcome | None:
    t0 = time.perf_counter()
    m, res, cycles, records = _run_attempt(pattern, r, cfg, kind)
    if m is None:
        return None
    return SolverOutcome(m, r, res, cycles, time.perf_counter() - t0, tuple(records))


def ap_attempt(pattern: PatternMatrix, r: int, cfg: SolverConfig) -> SolverOutcome | None:
    """Alternating projections at one rank target; None when every restart fails.

    The low-rank projection follows cfg.variant's flavor: eigendecomposition
    (PSD, symmetric patterns) or truncated SVD.
    """
    return _attempt_outcome(pattern, r, cfg, "ap")


def dirap_attempt(pattern: PatternMatrix, r: int, cfg: SolverConfig) -> SolverOutcome | None:
    """Directional AP: d = P_D(e), c = P_C(d), d' = P_D(c), then
    e_next = d + lam (d' - d) with lam = ||d - c||_F^2 / Tr((d - d')^T (d - c));
    a degenerate denominator falls back to the plain AP step for that cycle.
    """
    return _attempt_outcome(pattern, r, cfg, "dirap")


def altmin_attempt(pattern: PatternMatrix, r: int, cfg: SolverConfig) -> SolverOutcome | None:
    """Alternating least squares on M = E F^T against the pattern's fixed cells.

    Stops when the fixed-entry residual e_i satisfies |e_i - e_{i-1}| <= eps
    or e_i <= eps; only the latter counts as success.
    """
    return _attempt_outcome(pattern, r, cfg, "altmin")


_ATTEMPT_KIND = {
    Variant.AP_EIG: "ap",
    Variant.AP_SVD: "ap",
    Variant.DIRAP_EIG: "dirap",
    Variant.DIRAP_SVD: "dirap",
    Variant.ALTMIN: "altmin",
}


def _cover_completion(n: int, cliques: tuple[tuple[int, ...], ...]) -> np.ndarray:
    m = np.zeros((n, n))
    for clique in cliques:
        idx = np.array(clique) - 1
        m[np.ix_(idx, idx)] = 1.0
    return m


def sweep(
    pattern: PatternMatrix,
    start_rank: int,
    baseline: np.ndarray,
    cfg: SolverConfig,
) -> SolverOutcome:
    """Decrement the rank target from start_rank while attempts succeed.

    ``baseline`` must be an exact completion of rank start_rank; it is
    returned when the first decremented attempt already fails.
    """
    t0 = time.perf_counter()
    kind = _ATTEMPT_KIND[cfg.variant]
    records = [AttemptRecord(start_rank, 0, 0, 0.0, True)]
    best_m, best_r, best_res = baseline, start_rank, 0.0
    total_cycles = 0
    r = start_rank - 1
    while r >= 1:
        m, res, cycles, recs = _run_attempt(pattern, r, cfg, kind)
        total_cycles += cycles
        records.extend(recs)
        if m is None:
            break
        best_m, best_r, best_res = m, r, res
        r -= 1
    return SolverOutcome(
        best_m, best_r, best_res, total_cycles, time.perf_counter() - t0, tuple(records)
    )


def solve(graph: SideInfoGraph, cfg: SolverConfig) -> SolverOutcome:
    """Full rank sweep on a side information graph.

    EIG variants complete the symmetric pattern of the maximal undirected
    subgraph; SVD variants (and AltMin, which needs no symmetry) complete
    the directed pattern itself.  The sweep starts at the greedy clique
    cover size, whose exact 0/1 completion seeds the outcome.
    """
    und = undirected_subgraph(graph)
    cover = greedy_clique_cover(und)
    src = und if cfg.variant.uses_eig else graph
    pattern = PatternMatrix.from_graph(src)
    baseline = _cover_completion(graph.n, cover.cliques)
    return sweep(pattern, cover.number, baseline, cfg)


# ---------------------------------------------------------------------------
# matrix dump format: first line "n", then n rows of n space-separated
# values with enough digits for exact float64 round-trips.


def dumps_matrix(m: np.ndarray) -> str:
    m = _as_real_matrix(m, "dumps_matrix")
    n_rows, n_cols = m.shape
    if n_rows != n_cols:
        raise ValueError("matrix dump format is for square matrices")
    lines = [str(n_rows)]
    for row in m:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def dump_matrix(m: np.ndarray, path: str | Path) -> None:
    Path(path).write_text(dumps_matrix(m), encoding="utf-8")


def loads_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix dump")
    n = int(lines[0])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, found {len(lines) - 1}")
    rows = [[float(tok) for tok in ln.split()] for ln in lines[1:]]
    if any(len(row) != n for row in rows):
        raise ValueError("ragged or misshapen matrix dump")
    return np.array(rows, dtype=np.float64)


def load_matrix(path: str | Path) -> np.ndarray:
    return loads_matrix(Path(path).read_text(encoding="utf-8"))
