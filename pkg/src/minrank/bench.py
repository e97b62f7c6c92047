"""Benchmark harness: graph families x methods x trials, to CSV.

The design is paired: for each (n, p_or_c, trial) one graph is generated
from a seed derived deterministically from the experiment seed and the
grid coordinates, and every method runs on that same graph.  Rows come
back in (grid, trial, method) order regardless of how many workers ran
the trials, and the CSV round-trips floats exactly.
"""

from __future__ import annotations

import enum
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .coloring import greedy_coloring_number, ldg
from .graph import (
    SideInfoGraph,
    gen_directed_er,
    gen_directed_regular,
    gen_three_clique_coverable,
    gen_undirected_er,
    undirected_subgraph,
)
from .pattern import PatternMatrix
from .rankmin import SolverConfig, Variant, solve

__all__ = [
    "CSV_HEADER",
    "EmptyHistogramError",
    "ExperimentSpec",
    "Family",
    "Method",
    "ResultRow",
    "dumps_csv",
    "histogram",
    "read_rows",
    "run_experiment",
    "savings_vs_multicast",
    "savings_vs_uncoded",
    "write_csv",
]

CSV_HEADER = "family,n,p_or_c,method,trial,code_length,wall_time_s,iterations,residual,seed"


class EmptyHistogramError(ValueError):
    """No rows match the requested histogram slice."""


class Family(enum.Enum):
    UNDIRECTED_ER = "UNDIRECTED_ER"
    DIRECTED_ER = "DIRECTED_ER"
    DIRECTED_REGULAR = "DIRECTED_REGULAR"
    THREE_CLIQUE = "THREE_CLIQUE"


class Method(enum.Enum):
    GREEDY_COLORING = "GREEDY_COLORING"
    LDG = "LDG"
    AP_EIG = "AP_EIG"
    AP_SVD = "AP_SVD"
    DIRAP_EIG = "DIRAP_EIG"
    DIRAP_SVD = "DIRAP_SVD"
    ALTMIN = "ALTMIN"


_SOLVER_VARIANT = {
    Method.AP_EIG: Variant.AP_EIG,
    Method.AP_SVD: Variant.AP_SVD,
    Method.DIRAP_EIG: Variant.DIRAP_EIG,
    Method.DIRAP_SVD: Variant.DIRAP_SVD,
    Method.ALTMIN: Variant.ALTMIN,
}


@dataclass(frozen=True)
class ExperimentSpec:
    family: Family
    n_values: tuple[int, ...]
    p_or_c_values: tuple[float, ...]
    methods: tuple[Method, ...]
    trials: int = 1000
    seed: int = 0
    solver: SolverConfig = SolverConfig()

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_values", tuple(self.n_values))
        object.__setattr__(self, "p_or_c_values", tuple(self.p_or_c_values))
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.n_values or not self.p_or_c_values:
            raise ValueError("parameter grids must be nonempty")
        if not self.methods:
            raise ValueError("at least one method is required")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def to_json(self) -> str:
        data = {
            "family": self.family.value,
            "n_values": list(self.n_values),
            "p_or_c_values": list(self.p_or_c_values),
            "methods": [m.value for m in self.methods],
            "trials": self.trials,
            "seed": self.seed,
            "solver": {
                "epsilon": self.solver.epsilon,
                "max_iters": self.solver.max_iters,
                "restarts": self.solver.restarts,
            },
        }
        return json.dumps(data, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        data = json.loads(text)
        known = {"family", "n_values", "p_or_c_values", "methods", "trials", "seed", "solver"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown experiment fields: {sorted(extra)}")
        solver_data = dict(data.get("solver", {}))
        solver_extra = set(solver_data) - {"epsilon", "max_iters", "restarts"}
        if solver_extra:
            raise ValueError(f"unknown solver fields: {sorted(solver_extra)}")
        return cls(
            family=Family(data["family"]),
            n_values=tuple(int(n) for n in data["n_values"]),
            p_or_c_values=tuple(float(v) for v in data["p_or_c_values"]),
            methods=tuple(Method(m) for m in data["methods"]),
            trials=int(data.get("trials", 1000)),
            seed=int(data.get("seed", 0)),
            solver=SolverConfig(**solver_data),
        )


@dataclass(frozen=True)
class ResultRow:
    family: str
    n: int
    p_or_c: float
    method: str
    trial: int
    code_length: int
    wall_time_s: float
    iterations: int
    residual: float
    seed: int

    def __post_init__(self) -> None:
        if not (1 <= self.code_length <= self.n):
            raise ValueError(f"code_length {self.code_length} outside [1, {self.n}]")


def _generate(family: Family, n: int, p_or_c: float, seed: int) -> SideInfoGraph:
    if family is Family.UNDIRECTED_ER:
        return gen_undirected_er(n, p_or_c, seed)
    if family is Family.DIRECTED_ER:
        return gen_directed_er(n, p_or_c, seed)
    if family is Family.DIRECTED_REGULAR:
        return gen_directed_regular(n, int(p_or_c), seed)
    return gen_three_clique_coverable(n, p_or_c, seed)


def _graph_seed(spec_seed: int, gi: int, gj: int, trial: int) -> int:
    seq = np.random.SeedSequence([spec_seed, gi, gj, trial])
    return int(seq.generate_state(1, np.uint64)[0])


def _evaluate(
    method: Method, g: SideInfoGraph, base_cfg: SolverConfig, seed: int, measure_time: bool
) -> tuple[int, float, int, float]:
    """Returns (code_length, wall_time_s, iterations, residual)."""
    t0 = time.perf_counter() if measure_time else 0.0
    if method is Method.GREEDY_COLORING:
        length, iters, res = greedy_coloring_number(undirected_subgraph(g)), 0, 0.0
    elif method is Method.LDG:
        length, iters, res = ldg(PatternMatrix.from_graph(g)).code_length, 0, 0.0
    else:
        cfg = replace(base_cfg, variant=_SOLVER_VARIANT[method], seed=seed)
        outcome = solve(g, cfg)
        length, iters, res = outcome.r_star, outcome.iterations, outcome.residual
    wall = time.perf_counter() - t0 if measure_time else 0.0
    return length, wall, iters, res


def _paired_trial(
    spec: ExperimentSpec, gi: int, gj: int, trial: int, measure_time: bool
) -> list[ResultRow]:
    n = spec.n_values[gi]
    p_or_c = spec.p_or_c_values[gj]
    seed = _graph_seed(spec.seed, gi, gj, trial)
    g = _generate(spec.family, n, p_or_c, seed)
    rows = []
    for method in spec.methods:
        length, wall, iters, res = _evaluate(method, g, spec.solver, seed, measure_time)
        rows.append(
            ResultRow(
                family=spec.family.value,
                n=n,
                p_or_c=p_or_c,
                method=method.value,
                trial=trial,
                code_length=length,
                wall_time_s=wall,
                iterations=iters,
                residual=res,
                seed=seed,
            )
        )
    return rows


def run_experiment(
    spec: ExperimentSpec, measure_time: bool = True, threads: int = 1
) -> list[ResultRow]:
    """All grid points x trials x methods, one row each, paired per graph.

    With measure_time=False the wall_time_s column is written as 0.0 so
    repeated runs with the same seed produce byte-identical CSVs.
    """
    tasks = [
        (gi, gj, trial)
        for gi in range(len(spec.n_values))
        for gj in range(len(spec.p_or_c_values))
        for trial in range(spec.trials)
    ]
    if threads <= 1 or len(tasks) == 1:
        batches = [_paired_trial(spec, gi, gj, trial, measure_time) for gi, gj, trial in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_paired_trial, spec, gi, gj, trial, measure_time)
                for gi, gj, trial in tasks
            ]
            batches = [f.result() for f in futures]
    return [row for batch in batches for row in batch]


def savings_vs_multicast(row: ResultRow, graph: SideInfoGraph) -> float:
    """Percent saved against the n - min_i |H_i| multicast baseline."""
    if graph.n != row.n:
        raise ValueError("graph does not match the row's n")
    min_cache = min(len(graph.out_neighbors(i)) for i in range(1, graph.n + 1))
    denom = graph.n - min_cache
    if denom <= 0:
        return 0.0
    return 100.0 * (1.0 - row.code_length / denom)


def savings_vs_uncoded(row: ResultRow) -> float:
    """Percent saved against sending all n messages."""
    return 100.0 * (1.0 - row.code_length / row.n)


def _enum_name(value) -> str:
    return value.value if isinstance(value, enum.Enum) else str(value)


def histogram(rows: list[ResultRow], method, n: int, p: float) -> dict[int, int]:
    """Integer-bin frequencies of code_length over one (method, n, p) slice."""
    name = _enum_name(method)
    lengths = [
        r.code_length
        for r in rows
        if r.method == name and r.n == n and r.p_or_c == p
    ]
    if not lengths:
        raise EmptyHistogramError(f"no rows for method={name}, n={n}, p={p}")
    out: dict[int, int] = {}
    for length in sorted(lengths):
        out[length] = out.get(length, 0) + 1
    return out


def dumps_csv(rows: list[ResultRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.family},{r.n},{r.p_or_c!r},{r.method},{r.trial},"
            f"{r.code_length},{r.wall_time_s!r},{r.iterations},{r.residual!r},{r.seed}"
        )
    return "\n".join(lines) + "\n"


def write_csv(rows: list[ResultRow], path: str | Path) -> None:
    Path(path).write_text(dumps_csv(rows), encoding="utf-8")


def read_rows(path: str | Path) -> list[ResultRow]:
    """Load a CSV written by write_csv; floats round-trip exactly."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("not a benchmark CSV: header mismatch")
    rows = []
    for ln in lines[1:]:
        if not ln:
            continue
        parts = ln.split(",")
        if len(parts) != 10:
            raise ValueError(f"malformed CSV line: {ln!r}")
        rows.append(
            ResultRow(
                family=parts[0],
                n=int(parts[1]),
                p_or_c=float(parts[2]),
                method=parts[3],
                trial=int(parts[4]),
                code_length=int(parts[5]),
                wall_time_s=float(parts[6]),
                iterations=int(parts[7]),
                residual=float(parts[8]),
                seed=int(parts[9]),
            )
        )
    return rows
