import json
import math

import pytest

from utils.errors import InputError
from utils.plotting import (
    TABLE_COLUMNS, arcs_frame, breakpoints_frame, format_table, profile_table, save_step_chart, step_chart,
)
from utils.seifert_core import SeifertMatrix, signature_profile


def _layer_values(chart: dict, layer: dict) -> list:
    data = layer["data"]
    if "values" in data:
        return data["values"]
    return chart["datasets"][data["name"]]


def test_trefoil_table(trefoil):
    table = profile_table(signature_profile(trefoil))
    assert list(table.columns) == TABLE_COLUMNS
    assert table["breakpoint"].tolist() == ["π/3", "5π/3"]
    assert table["left"].tolist() == [0, 2]
    assert table["right"].tolist() == [2, 0]
    assert table["jump"].tolist() == [2, -2]
    assert table["value"].tolist() == [1, 1]
    text = format_table(table)
    assert text.splitlines()[0].split() == TABLE_COLUMNS
    assert "5π/3" in text


def test_constant_profiles_have_empty_tables(figure_eight):
    for matrix in (SeifertMatrix.zero(2), figure_eight):
        table = profile_table(signature_profile(matrix))
        assert table.empty
        assert list(table.columns) == TABLE_COLUMNS
        assert format_table(table) == ""


def test_frames(trefoil):
    profile = signature_profile(trefoil)
    arcs = arcs_frame(profile)
    assert arcs["y"].tolist() == [0, 2, 0]
    assert arcs["x"].iloc[0] == 0
    assert arcs["x2"].iloc[-1] == pytest.approx(2 * math.pi)
    assert arcs["x2"].iloc[0] == pytest.approx(math.pi / 3)
    markers = breakpoints_frame(profile)
    assert markers["label"].tolist() == ["π/3", "5π/3"]
    assert markers["x"].tolist() == pytest.approx([math.pi / 3, 5 * math.pi / 3])


def test_constant_profile_is_one_arc():
    arcs = arcs_frame(signature_profile(SeifertMatrix.zero(1)))
    assert arcs.values.tolist() == [[0.0, pytest.approx(2 * math.pi), 0]]


def test_step_chart_layers(trefoil):
    chart = step_chart(signature_profile(trefoil), title="trefoil").to_dict()
    assert chart["title"] == "trefoil"
    arcs, markers = chart["layer"]
    assert arcs["mark"]["type"] == "rule"
    assert markers["mark"]["strokeDash"] == [4, 4]
    assert len(_layer_values(chart, arcs)) == 3
    assert [row["label"] for row in _layer_values(chart, markers)] == ["π/3", "5π/3"]


@pytest.mark.parametrize("suffix", [".json", ".html"])
def test_save_step_chart(tmp_path, trefoil, suffix):
    path = tmp_path / f"profile{suffix}"
    save_step_chart(step_chart(signature_profile(trefoil)), str(path))
    content = path.read_text(encoding="utf-8")
    assert content
    if suffix == ".json":
        assert len(json.loads(content)["layer"]) == 2


def test_save_step_chart_rejects_other_formats(tmp_path, trefoil):
    with pytest.raises(InputError):
        save_step_chart(step_chart(signature_profile(trefoil)), str(tmp_path / "profile.png"))
