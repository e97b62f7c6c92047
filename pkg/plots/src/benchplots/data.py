"""CSV loading, slicing, and aggregation for benchmark result files."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .figspec import FigureKind, FigureSpec

CSV_COLUMNS = (
    "family",
    "n",
    "p_or_c",
    "method",
    "trial",
    "code_length",
    "wall_time_s",
    "iterations",
    "residual",
    "seed",
)


class MissingColumnError(ValueError):
    """The CSV lacks a column the figure needs."""


class EmptySliceError(ValueError):
    """A slice filter matched no rows."""


@dataclass(frozen=True)
class Row:
    family: str
    n: int
    p_or_c: float
    method: str
    value: float


def required_columns(kind: FigureKind) -> tuple[str, ...]:
    return ("family", "n", "p_or_c", "method", kind.value_column)


def load_rows(csv_path: Path, kind: FigureKind) -> list[Row]:
    """Read the columns the figure kind references, in file order."""
    try:
        text = csv_path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise FileNotFoundError(f"csv not found: {csv_path}") from None
    reader = csv.DictReader(text.splitlines())
    header = reader.fieldnames or []
    missing = [c for c in required_columns(kind) if c not in header]
    if missing:
        raise MissingColumnError(
            f"csv {csv_path} is missing required column(s) {missing}; "
            f"found {list(header)}"
        )
    rows: list[Row] = []
    for lineno, rec in enumerate(reader, start=2):
        try:
            rows.append(
                Row(
                    family=rec["family"],
                    n=int(rec["n"]),
                    p_or_c=float(rec["p_or_c"]),
                    method=rec["method"],
                    value=float(rec[kind.value_column]),
                )
            )
        except (TypeError, ValueError) as e:
            raise ValueError(f"csv {csv_path} line {lineno}: {e}") from None
    if not rows:
        raise EmptySliceError(f"csv {csv_path} has no data rows")
    return rows


def slice_rows(rows: list[Row], spec: FigureSpec) -> list[Row]:
    """Apply the spec's filters in order; name the first one that empties."""
    if spec.family is not None:
        keep = [r for r in rows if r.family == spec.family]
        if not keep:
            raise EmptySliceError(
                f"empty slice: filter family={spec.family!r} matched no rows; "
                f"csv offers {sorted({r.family for r in rows})}"
            )
        rows = keep
    if spec.methods is not None:
        keep = [r for r in rows if r.method in spec.methods]
        if not keep:
            raise EmptySliceError(
                f"empty slice: filter methods={list(spec.methods)!r} matched no "
                f"rows; csv offers {sorted({r.method for r in rows})}"
            )
        rows = keep
    if spec.p_or_c_values is not None:
        keep = [r for r in rows if r.p_or_c in spec.p_or_c_values]
        if not keep:
            raise EmptySliceError(
                f"empty slice: filter p_or_c_values={list(spec.p_or_c_values)!r} "
                f"matched no rows; csv offers {sorted({r.p_or_c for r in rows})}"
            )
        rows = keep
    if spec.n_values is not None:
        keep = [r for r in rows if r.n in spec.n_values]
        if not keep:
            raise EmptySliceError(
                f"empty slice: filter n_values={list(spec.n_values)!r} matched "
                f"no rows; csv offers {sorted({r.n for r in rows})}"
            )
        rows = keep
    return rows


def x_axis(rows: list[Row]) -> tuple[str, list[float]]:
    """Pick the x variable: n when it varies, otherwise the p/c parameter."""
    ns = sorted({r.n for r in rows})
    if len(ns) > 1:
        return "n", [float(v) for v in ns]
    params = sorted({r.p_or_c for r in rows})
    if len(params) > 1:
        return "p_or_c", params
    # single cell: fall back to n so a one-row CSV still plots one point
    return "n", [float(v) for v in ns]


def series_means(
    rows: list[Row], x_var: str
) -> dict[tuple[str, float | None], tuple[list[float], list[float]]]:
    """Mean value per (method, fixed parameter) series along the x variable.

    When x is n, each (method, p_or_c) pair is its own series; when x is the
    parameter itself, the series key is (method, None). The returned xs are
    sorted and ys are np.mean over the matching rows in file order, so a
    recomputation from the same file reproduces them bit for bit.
    """
    series: dict[tuple[str, float | None], dict[float, list[float]]] = {}
    for r in rows:
        if x_var == "n":
            key = (r.method, r.p_or_c)
            x = float(r.n)
        else:
            key = (r.method, None)
            x = r.p_or_c
        series.setdefault(key, {}).setdefault(x, []).append(r.value)
    out: dict[tuple[str, float | None], tuple[list[float], list[float]]] = {}
    for key in sorted(series, key=lambda k: (k[0], -1.0 if k[1] is None else k[1])):
        buckets = series[key]
        xs = sorted(buckets)
        ys = [float(np.mean(buckets[x])) for x in xs]
        out[key] = (xs, ys)
    return out


def method_values(rows: list[Row]) -> dict[str, list[float]]:
    """Raw value lists per method, in file order (histogram input)."""
    out: dict[str, list[float]] = {}
    for r in rows:
        out.setdefault(r.method, []).append(r.value)
    return {m: out[m] for m in sorted(out)}


def param_label(rows: list[Row]) -> str:
    """'c' for the regular directed family's degree parameter, else 'p'."""
    families = {r.family for r in rows}
    return "c" if families == {"DIRECTED_REGULAR"} else "p"
