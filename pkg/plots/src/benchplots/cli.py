"""Command-line entry point: render --spec <figure-spec.json>.

Exit codes mirror the solver CLI: 0 success, 1 usage error (bad arguments or
a malformed spec), 2 render error (missing file, missing column, empty
slice, or a recomputation-check failure).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figspec import FigureSpec, SpecError
from .render import render


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D102 - argparse hook
        raise _UsageError(message)


def main(argv: list[str] | None = None) -> int:
    parser = _Parser(
        prog="render",
        description=(
            "Render one figure from a benchmark CSV. The spec JSON names the "
            "CSV, the figure kind (AVG_LENGTH, SAVINGS, HISTOGRAM, TIMING, "
            "ITERATIONS), optional slice filters, and the output stem; the "
            "render writes <out>.png and <out>.svg after an exact "
            "recomputation check of every plotted series."
        ),
    )
    parser.add_argument("--spec", required=True, help="path to a figure-spec JSON")
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        spec = FigureSpec.from_json_file(Path(args.spec))
    except FileNotFoundError:
        print(f"usage error: spec file not found: {args.spec}", file=sys.stderr)
        return 1
    except SpecError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 1
    try:
        report = render(spec)
    except Exception as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(
        f"wrote {report.png_path} and {report.svg_path}; "
        f"recomputation check passed on {report.series_checked} series"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
