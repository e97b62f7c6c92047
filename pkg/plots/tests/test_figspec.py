import json
from pathlib import Path

import pytest

from benchplots.figspec import FigureKind, FigureSpec, SpecError


def test_full_spec_parses_and_resolves_relative_paths(tmp_path):
    spec = FigureSpec.from_json(
        json.dumps(
            {
                "csv_path": "data/bench.csv",
                "figure_kind": "SAVINGS",
                "out": "figs/savings",
                "family": "UNDIRECTED_ER",
                "methods": ["AP_EIG", "GREEDY_COLORING"],
                "p_or_c_values": [0.2, 0.8],
                "n_values": [10, 20],
                "baseline": "LDG",
                "title": "savings",
            }
        ),
        base_dir=tmp_path,
    )
    assert spec.csv_path == tmp_path / "data/bench.csv"
    assert spec.out == tmp_path / "figs/savings"
    assert spec.figure_kind is FigureKind.SAVINGS
    assert spec.methods == ("AP_EIG", "GREEDY_COLORING")
    assert spec.p_or_c_values == (0.2, 0.8)
    assert spec.n_values == (10, 20)
    assert spec.baseline == "LDG"


def test_absolute_paths_ignore_base_dir(tmp_path):
    spec = FigureSpec.from_json(
        json.dumps(
            {"csv_path": "/abs/b.csv", "figure_kind": "AVG_LENGTH", "out": "/abs/fig"}
        ),
        base_dir=tmp_path,
    )
    assert spec.csv_path == Path("/abs/b.csv")
    assert spec.out == Path("/abs/fig")


def test_image_extension_stripped_from_out():
    spec = FigureSpec(
        csv_path=Path("b.csv"), figure_kind=FigureKind.AVG_LENGTH, out=Path("fig.png")
    )
    assert spec.out == Path("fig")
    spec = FigureSpec(
        csv_path=Path("b.csv"), figure_kind=FigureKind.AVG_LENGTH, out=Path("fig.svg")
    )
    assert spec.out == Path("fig")


def test_unknown_key_rejected():
    with pytest.raises(SpecError, match="unknown spec keys.*beans"):
        FigureSpec.from_json(
            '{"csv_path": "b.csv", "figure_kind": "TIMING", "out": "f", "beans": 1}'
        )


@pytest.mark.parametrize("missing", ["csv_path", "figure_kind", "out"])
def test_missing_required_key_named(missing):
    raw = {"csv_path": "b.csv", "figure_kind": "TIMING", "out": "f"}
    del raw[missing]
    with pytest.raises(SpecError, match=missing):
        FigureSpec.from_json(json.dumps(raw))


def test_unknown_figure_kind_lists_options():
    with pytest.raises(SpecError, match="HEATMAP.*AVG_LENGTH"):
        FigureSpec.from_json(
            '{"csv_path": "b.csv", "figure_kind": "HEATMAP", "out": "f"}'
        )


def test_not_json_and_not_object():
    with pytest.raises(SpecError, match="not valid JSON"):
        FigureSpec.from_json("{nope")
    with pytest.raises(SpecError, match="JSON object"):
        FigureSpec.from_json("[1, 2]")


def test_empty_filter_lists_rejected():
    with pytest.raises(SpecError, match="methods"):
        FigureSpec.from_json(
            '{"csv_path": "b.csv", "figure_kind": "TIMING", "out": "f", "methods": []}'
        )


def test_from_json_file_resolves_against_spec_dir(tmp_path):
    spec_file = tmp_path / "sub" / "fig.json"
    spec_file.parent.mkdir()
    spec_file.write_text(
        '{"csv_path": "bench.csv", "figure_kind": "HISTOGRAM", "out": "fig"}',
        encoding="utf-8",
    )
    spec = FigureSpec.from_json_file(spec_file)
    assert spec.csv_path == tmp_path / "sub" / "bench.csv"
    assert spec.out == tmp_path / "sub" / "fig"


def test_value_column_per_kind():
    assert FigureKind.AVG_LENGTH.value_column == "code_length"
    assert FigureKind.SAVINGS.value_column == "code_length"
    assert FigureKind.HISTOGRAM.value_column == "code_length"
    assert FigureKind.TIMING.value_column == "wall_time_s"
    assert FigureKind.ITERATIONS.value_column == "iterations"
