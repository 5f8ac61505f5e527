import re

import numpy as np
import pytest

from fusionmod.alcove import LevelRank
from fusionmod.export import (
    heatmap_array,
    heatmap_png,
    records_frame,
    render,
    write_heatmap,
    write_result,
)
from fusionmod.invariants import IntMatrix, scale, z_plus


def _md_cells(line):
    return [c.strip() for c in re.split(r"(?<!\\)\|", line)[1:-1]]


def test_render_formats():
    obj = {"b": 2, "a": 1}
    df = records_frame([{"x": 1, "y": "a|b"}, {"x": 2, "y": None}])
    assert render(obj, "json") == '{"a":1,"b":2}\n'
    assert render(obj, "csv") == render(obj, "json")
    assert render(obj, "csv", df) == "x,y\n1,a|b\n2,\n"
    md = render(obj, "md", df)
    header, rule, *body = md.splitlines()
    assert md.endswith("\n")
    assert re.fullmatch(r"\|[-:|]+\|", rule)
    assert [_md_cells(line) for line in [header, *body]] == [["x", "y"], ["1", "a\\|b"], ["2", ""]]
    with pytest.raises(ValueError):
        render(obj, "xml")


def test_write_result(tmp_path):
    path = tmp_path / "r.json"
    write_result(path, {"ok": True}, "json")
    assert path.read_text(encoding="utf-8") == '{"ok":true}\n'


def test_heatmap_shades():
    z = scale(IntMatrix.identity(LevelRank(2, 1)), 3)
    img = heatmap_array(z)
    assert img.dtype == np.uint8
    assert img.tolist() == [[0, 255], [255, 0]]


def test_heatmap_downsamples():
    z = z_plus(6, 6, 3)
    img = heatmap_array(z, max_side=100)
    assert img.shape == (93, 93)
    assert img.min() < 255


def test_png_output(tmp_path):
    pytest.importorskip("PIL")
    z = IntMatrix.identity(LevelRank(3, 2))
    assert heatmap_png(z).startswith(b"\x89PNG")
    path = write_heatmap(tmp_path / "z.png", z)
    assert path is not None and path.exists()
