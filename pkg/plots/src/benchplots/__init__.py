"""Figure rendering for minrank benchmark CSVs.

This package is deliberately decoupled from the solver package: it consumes
only the benchmark CSV schema

    family,n,p_or_c,method,trial,code_length,wall_time_s,iterations,residual,seed

and turns slices of it into average-length curves, savings curves,
histograms, timing curves, and iteration-count curves, written as PNG + SVG
pairs. Every render ends with a recomputation check: the values sitting in
the figure's artists are compared, exactly, against a fresh re-read of the
CSV, so a figure that saves is a figure that faithfully shows its data.
"""

from .data import CSV_COLUMNS, EmptySliceError, MissingColumnError
from .figspec import FigureKind, FigureSpec
from .render import RecomputationError, RenderReport, render

__all__ = [
    "CSV_COLUMNS",
    "EmptySliceError",
    "FigureKind",
    "FigureSpec",
    "MissingColumnError",
    "RecomputationError",
    "RenderReport",
    "render",
]
