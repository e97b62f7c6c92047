"""Figure specification: what to plot, from which CSV slice, to which files."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path


class FigureKind(enum.Enum):
    AVG_LENGTH = "AVG_LENGTH"
    SAVINGS = "SAVINGS"
    HISTOGRAM = "HISTOGRAM"
    TIMING = "TIMING"
    ITERATIONS = "ITERATIONS"

    @property
    def value_column(self) -> str:
        if self is FigureKind.TIMING:
            return "wall_time_s"
        if self is FigureKind.ITERATIONS:
            return "iterations"
        return "code_length"


class SpecError(ValueError):
    """The figure spec itself is malformed."""


_KNOWN_KEYS = {
    "csv_path",
    "figure_kind",
    "out",
    "family",
    "methods",
    "p_or_c_values",
    "n_values",
    "baseline",
    "title",
}


@dataclass(frozen=True)
class FigureSpec:
    """One figure: a CSV, a slice of it, a figure kind, and an output stem.

    ``out`` is an extension-free stem; rendering writes ``<out>.png`` and
    ``<out>.svg``. The slice filters are optional; a filter that matches no
    rows is a render-time error naming that filter. ``baseline`` is used
    only by SAVINGS figures (curves show the percentage reduction in mean
    code length relative to the baseline method).
    """

    csv_path: Path
    figure_kind: FigureKind
    out: Path
    family: str | None = None
    methods: tuple[str, ...] | None = None
    p_or_c_values: tuple[float, ...] | None = None
    n_values: tuple[int, ...] | None = None
    baseline: str = "GREEDY_COLORING"
    title: str | None = None

    def __post_init__(self) -> None:
        if self.out.suffix in (".png", ".svg"):
            object.__setattr__(self, "out", self.out.with_suffix(""))
        if self.methods is not None and not self.methods:
            raise SpecError("methods filter must list at least one method")
        if self.p_or_c_values is not None and not self.p_or_c_values:
            raise SpecError("p_or_c_values filter must list at least one value")
        if self.n_values is not None and not self.n_values:
            raise SpecError("n_values filter must list at least one value")

    @staticmethod
    def from_json(text: str, base_dir: Path | None = None) -> "FigureSpec":
        """Parse a spec from JSON; relative paths resolve against base_dir."""
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecError(f"spec is not valid JSON: {e}") from None
        if not isinstance(raw, dict):
            raise SpecError("spec must be a JSON object")
        unknown = set(raw) - _KNOWN_KEYS
        if unknown:
            raise SpecError(f"unknown spec keys: {sorted(unknown)}")
        for key in ("csv_path", "figure_kind", "out"):
            if key not in raw:
                raise SpecError(f"spec is missing required key {key!r}")
        try:
            kind = FigureKind(raw["figure_kind"])
        except ValueError:
            raise SpecError(
                f"unknown figure_kind {raw['figure_kind']!r}; "
                f"expected one of {[k.value for k in FigureKind]}"
            ) from None

        def _resolve(p: str) -> Path:
            path = Path(p)
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            return path

        methods = raw.get("methods")
        p_values = raw.get("p_or_c_values")
        n_values = raw.get("n_values")
        return FigureSpec(
            csv_path=_resolve(str(raw["csv_path"])),
            figure_kind=kind,
            out=_resolve(str(raw["out"])),
            family=raw.get("family"),
            methods=None if methods is None else tuple(str(m) for m in methods),
            p_or_c_values=None if p_values is None else tuple(float(v) for v in p_values),
            n_values=None if n_values is None else tuple(int(v) for v in n_values),
            baseline=str(raw.get("baseline", "GREEDY_COLORING")),
            title=raw.get("title"),
        )

    @staticmethod
    def from_json_file(path: Path) -> "FigureSpec":
        return FigureSpec.from_json(
            path.read_text(encoding="utf-8"), base_dir=path.parent
        )
