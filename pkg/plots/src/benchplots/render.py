"""Figure construction, the embedded recomputation check, and file output."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .data import (
    EmptySliceError,
    Row,
    load_rows,
    method_values,
    param_label,
    series_means,
    slice_rows,
    x_axis,
)
from .figspec import FigureKind, FigureSpec
from .style import RC, method_color, method_marker, param_linestyle


class RecomputationError(RuntimeError):
    """The figure's artists disagree with a fresh recomputation of the CSV."""


@dataclass(frozen=True)
class RenderReport:
    png_path: Path
    svg_path: Path
    series_checked: int


_Y_LABELS = {
    FigureKind.AVG_LENGTH: "mean code length",
    FigureKind.TIMING: "mean seconds per solve",
    FigureKind.ITERATIONS: "mean projection cycles",
}

_MEAN_LINE_PREFIX = "_mean:"


@dataclass(frozen=True)
class _Series:
    method: str
    param: float | None
    label: str
    xs: tuple[float, ...]
    ys: tuple[float, ...]


def _curve_series(rows: list[Row], spec: FigureSpec) -> list[_Series]:
    """Mean-value series for AVG_LENGTH / TIMING / ITERATIONS figures."""
    x_var, _ = x_axis(rows)
    means = series_means(rows, x_var)
    pl = param_label(rows)
    params = sorted({k[1] for k in means if k[1] is not None})
    out = []
    for (method, param), (xs, ys) in means.items():
        if param is None or len(params) <= 1:
            label = method
        else:
            label = f"{method} ({pl}={param:g})"
        out.append(_Series(method, param, label, tuple(xs), tuple(ys)))
    return out


def _savings_series(rows: list[Row], spec: FigureSpec) -> list[_Series]:
    """Percentage reduction of each method's mean length vs the baseline."""
    x_var, _ = x_axis(rows)
    means = series_means(rows, x_var)
    pl = param_label(rows)
    params = sorted({k[1] for k in means if k[1] is not None})
    base: dict[float | None, dict[float, float]] = {}
    for (method, param), (xs, ys) in means.items():
        if method == spec.baseline:
            base[param] = dict(zip(xs, ys))
    if not base:
        raise EmptySliceError(
            f"savings baseline {spec.baseline!r} has no rows in the slice; "
            f"csv offers {sorted({r.method for r in rows})}"
        )
    out = []
    for (method, param), (xs, ys) in means.items():
        if method == spec.baseline:
            continue
        bmap = base.get(param)
        if bmap is None or any(x not in bmap for x in xs):
            where = f" at {pl}={param:g}" if param is not None else ""
            raise EmptySliceError(
                f"savings baseline {spec.baseline!r} does not cover the slice{where}"
            )
        sav = tuple(100.0 * (1.0 - y / bmap[x]) for x, y in zip(xs, ys))
        if param is None or len(params) <= 1:
            label = method
        else:
            label = f"{method} ({pl}={param:g})"
        out.append(_Series(method, param, label, tuple(xs), sav))
    return out


def _histogram_data(
    rows: list[Row],
) -> tuple[np.ndarray, dict[str, tuple[float, np.ndarray]]]:
    """Integer bin centers plus, per method, (mean, counts per bin)."""
    mv = method_values(rows)
    all_vals = [v for vals in mv.values() for v in vals]
    lo, hi = int(min(all_vals)), int(max(all_vals))
    centers = np.arange(lo, hi + 1, dtype=float)
    edges = np.arange(lo, hi + 2, dtype=float) - 0.5
    out: dict[str, tuple[float, np.ndarray]] = {}
    for method, vals in mv.items():
        counts, _ = np.histogram(vals, bins=edges)
        out[method] = (float(np.mean(vals)), counts.astype(float))
    return centers, out


def _build_curves(spec: FigureSpec, series: list[_Series], rows: list[Row]):
    x_var, _ = x_axis(rows)
    pl = param_label(rows)
    params = sorted({s.param for s in series if s.param is not None})
    fig, ax = plt.subplots()
    for s in series:
        if s.param is not None and len(params) > 1:
            ls = param_linestyle(params.index(s.param))
        else:
            ls = "-"
        ax.plot(
            s.xs,
            s.ys,
            label=s.label,
            color=method_color(s.method),
            marker=method_marker(s.method),
            linestyle=ls,
            markersize=5,
        )
    ax.set_xlabel("n" if x_var == "n" else pl)
    if spec.figure_kind is FigureKind.SAVINGS:
        ax.set_ylabel(f"savings % vs {spec.baseline}")
    else:
        ax.set_ylabel(_Y_LABELS[spec.figure_kind])
    ax.legend()
    return fig


def _build_histogram(spec: FigureSpec, rows: list[Row]):
    centers, data = _histogram_data(rows)
    width = 0.8 / len(data)
    fig, ax = plt.subplots()
    for j, (method, (mean, counts)) in enumerate(data.items()):
        offset = (j - (len(data) - 1) / 2.0) * width
        ax.bar(
            centers + offset,
            counts,
            width=width,
            label=method,
            color=method_color(method),
        )
        ax.axvline(
            mean,
            color=method_color(method),
            linestyle="--",
            linewidth=1.2,
            label=f"{_MEAN_LINE_PREFIX}{method}",
        )
    ax.set_xlabel("code length")
    ax.set_ylabel("count")
    ax.set_xticks(centers)
    ax.legend()
    return fig


def _exact_equal(label: str, got, want) -> None:
    got = [float(v) for v in got]
    want = [float(v) for v in want]
    if len(got) != len(want) or any(g != w for g, w in zip(got, want)):
        raise RecomputationError(
            f"series {label!r}: plotted values do not equal the CSV "
            f"recomputation (plotted {got}, recomputed {want})"
        )


def _verify_curves(fig, fresh_series: list[_Series]) -> int:
    ax = fig.axes[0]
    plotted = {
        line.get_label(): (line.get_xdata(orig=True), line.get_ydata(orig=True))
        for line in ax.get_lines()
    }
    expected = {s.label: (s.xs, s.ys) for s in fresh_series}
    if set(plotted) != set(expected):
        raise RecomputationError(
            f"figure series {sorted(plotted)} do not match the CSV "
            f"recomputation {sorted(expected)}"
        )
    for label, (xs, ys) in expected.items():
        got_x, got_y = plotted[label]
        _exact_equal(f"{label} x", got_x, xs)
        _exact_equal(f"{label} y", got_y, ys)
    return len(expected)


def _verify_histogram(fig, fresh_rows: list[Row]) -> int:
    centers, data = _histogram_data(fresh_rows)
    ax = fig.axes[0]
    plotted_means = {
        line.get_label()[len(_MEAN_LINE_PREFIX):]: float(line.get_xdata()[0])
        for line in ax.get_lines()
        if line.get_label().startswith(_MEAN_LINE_PREFIX)
    }
    plotted_counts = {
        cont.get_label(): [patch.get_height() for patch in cont]
        for cont in ax.containers
    }
    if set(plotted_means) != set(data) or set(plotted_counts) != set(data):
        raise RecomputationError(
            f"histogram methods {sorted(plotted_counts)} do not match the "
            f"CSV recomputation {sorted(data)}"
        )
    for method, (mean, counts) in data.items():
        _exact_equal(f"{method} mean", [plotted_means[method]], [mean])
        _exact_equal(f"{method} counts", plotted_counts[method], counts)
    return len(data)


def render(spec: FigureSpec) -> RenderReport:
    """Build the figure, verify it against a fresh CSV read, save PNG + SVG."""
    with matplotlib.rc_context(RC):
        rows = slice_rows(load_rows(spec.csv_path, spec.figure_kind), spec)
        if spec.figure_kind is FigureKind.HISTOGRAM:
            fig = _build_histogram(spec, rows)
        elif spec.figure_kind is FigureKind.SAVINGS:
            fig = _build_curves(spec, _savings_series(rows, spec), rows)
        else:
            fig = _build_curves(spec, _curve_series(rows, spec), rows)
        if spec.title:
            fig.axes[0].set_title(spec.title)
        try:
            # the recomputation check: re-read the file from disk, re-slice,
            # re-aggregate, and demand the artists hold exactly those numbers
            fresh = slice_rows(load_rows(spec.csv_path, spec.figure_kind), spec)
            if spec.figure_kind is FigureKind.HISTOGRAM:
                checked = _verify_histogram(fig, fresh)
            elif spec.figure_kind is FigureKind.SAVINGS:
                checked = _verify_curves(fig, _savings_series(fresh, spec))
            else:
                checked = _verify_curves(fig, _curve_series(fresh, spec))
            fig.tight_layout()
            png_path = Path(str(spec.out) + ".png")
            svg_path = Path(str(spec.out) + ".svg")
            spec.out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(png_path, metadata={"Software": "benchplots"})
            fig.savefig(svg_path, metadata={"Date": None})
        finally:
            plt.close(fig)
    return RenderReport(png_path=png_path, svg_path=svg_path, series_checked=checked)
