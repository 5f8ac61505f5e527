import logging

import pytest

from fusionmod.classify import (
    SPECIAL_COUNTS,
    classify,
    counts_table,
    fixed_point_check,
    fixed_point_failures,
    fixed_point_weight,
    free_weight_exceptions,
    free_weight_search,
    generic_count,
    generic_labels,
    generic_tensor_table,
    is_exceptional_level,
    linear_dependencies,
    special_count,
    tensor_report,
)
from fusionmod.errors import CheckFailure


def test_generic_labels_66():
    names = [lbl.name for lbl in generic_labels(6, 6)]
    assert names == ["M1+", "M2+", "M3+", "M6+", "M1-", "M2-", "M3-", "M6-"]


def test_generic_labels_degenerate_levels():
    assert [lbl.name for lbl in generic_labels(2, 2)] == ["M1+"]
    assert [lbl.name for lbl in generic_labels(2, 4)] == ["M1+", "M2+"]
    assert [lbl.name for lbl in generic_labels(6, 7)] == ["M1+", "M3+", "M1-", "M3-"]


@pytest.mark.parametrize("n,k,want", [(2, 2, 1), (2, 4, 2), (5, 4, 4), (6, 6, 8), (6, 7, 4), (12, 6, 12), (8, 2, 4)])
def test_generic_count(n, k, want):
    assert generic_count(n, k) == want


def test_generic_count_mismatch_reported(monkeypatch):
    monkeypatch.setattr("fusionmod.classify.coset_count", lambda n, k, m: 0)
    with pytest.raises(CheckFailure) as exc:
        generic_count(5, 4)
    assert exc.value.report["sigma_formula"] == 4


def test_special_counts_table():
    assert list(SPECIAL_COUNTS.values()) == [6, 8, 5, 7, 8, 9, 6, 12, 8, 12, 16, 12, 8, 10, 8]
    for (n, k), want in SPECIAL_COUNTS.items():
        assert special_count(n, k) == want, (n, k)
    df = counts_table()
    assert (df["count"] == df["expected"]).all()
    assert len(df) == 15


def test_classify_exceptional_and_generic():
    res = classify(6, 6)
    assert res["exceptional"] and res["count"] == 16
    res = classify(5, 4)
    assert not res["exceptional"] and res["count"] == 4
    assert res["labels"][0] == {"kind": "generic", "name": "M1+", "d": 1, "sign": "+"}


def test_large_rank_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="fusionmod.classify"):
        assert not is_exceptional_level(8, 3)
    assert "not verified" in caplog.text


def test_linear_dependencies():
    rank, deps = linear_dependencies(4, 4)
    assert rank == 5
    assert deps == [{"M2+": 1, "M4+": 1, "M2-": -1, "M4-": -1}]
    assert linear_dependencies(6, 3) == (3, [{"M3+": 1, "M3-": -1}])
    rank, deps = linear_dependencies(6, 6)
    assert (rank, deps) == (8, [])


def test_tensor_report_statuses():
    report = tensor_report(6, 6)
    assert report["status"] == "ok"
    assert report["rank"] == 8
    assert report["decomposition_failures"] == []
    assert tensor_report(3, 3)["status"] == "unverified"


def test_generic_tensor_table():
    table = generic_tensor_table(6, 6)
    assert table.cell_text("M3+", "M3+") == "3 M3+"
    assert table.cell_text("M2+", "M3-") == "M6-"
    assert table.is_commutative()
    df = table.to_frame()
    assert list(df.columns) == [""] + table.labels


def test_free_weight_search():
    assert free_weight_search(2, 2, 1) is None
    assert free_weight_search(2, 2, 0).short() == []
    with pytest.raises(ValueError):
        free_weight_search(3, 3, 0, "S_N")
    with pytest.raises(ValueError):
        free_weight_search(3, 3, 3)


def test_free_weight_small_ranges():
    assert free_weight_exceptions(range(2, 5), range(1, 6), "Z_N") == [(2, 2, 1)]
    assert free_weight_exceptions(range(3, 6), range(3, 6), "D_N") == [(3, 3, 0), (4, 4, 0), (4, 4, 2), (5, 5, 0)]


def test_fixed_point_weight_and_failures():
    assert fixed_point_weight(2, 6).short() == [3]
    assert fixed_point_check(2, 6) == (False, 2)
    assert fixed_point_check(3, 3)[0]
    assert fixed_point_failures(range(2, 7), range(3, 7)) == [(2, 3), (2, 6), (3, 4), (4, 5), (5, 3)]
    with pytest.raises(ValueError):
        fixed_point_check(1, 5)
