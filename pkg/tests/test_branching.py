from collections import Counter

import pytest

from fusionmod.alcove import LevelRank, weight
from fusionmod.branching import (
    TABLE_IDS,
    BranchingTable,
    branch_adjoint,
    branch_minus2,
    branch_plus2,
    branching_matrix,
    consistency_check,
    extension_branching,
    get_table,
    grading_check,
    local_twists,
    so_extension,
    sporadic_table,
    staircase,
    transpose_branching,
)
from fusionmod.errors import CheckFailure
from fusionmod.invariants import type_one
from fusionmod.modular import is_physical


def shorts(row):
    return {tuple(w.short()) for w in row}


@pytest.mark.parametrize(
    "build,n,label,want",
    [
        (branch_plus2, 3, "Λ1", {(2,), (5, 3)}),
        (branch_plus2, 4, "Λ1", {(2,), (6, 6, 2), (5, 3, 2)}),
        (branch_minus2, 5, "Λ1", {(1, 1), (3, 2, 2)}),
        (branch_minus2, 5, "Λ9", {(1, 1, 1), (3, 3, 1, 1)}),
    ],
)
def test_family_rows(build, n, label, want):
    table = build(n)
    assert shorts(table.rows[label]) == want
    assert all(m == 1 for m in table.rows[label].values())


def test_family_sizes():
    assert len(branch_plus2(4).labels) == 10
    assert len(branch_minus2(5).labels) == 10
    with pytest.raises(ValueError):
        branch_plus2(2)
    with pytest.raises(ValueError):
        branch_minus2(3)


def test_adjoint_spinor_row():
    table = branch_adjoint(6)
    assert table.labels == ["1", "V", "S"]
    assert table.rows["S"] == Counter({staircase(LevelRank(6, 6)): 4})
    assert staircase(LevelRank(6, 6)).short() == [5, 4, 3, 2, 1]
    assert branch_adjoint(5).labels == ["1", "V", "S+", "S-"]


def test_so_extension_needs_residue():
    with pytest.raises(ValueError):
        so_extension(6)
    assert so_extension(7).labels == ["1"]


def test_sp20_vacuum_row():
    table = sporadic_table("sl6_6_sp20")
    assert shorts(table.vacuum) == {
        (), (6, 6), (6, 6, 6, 6),
        (2, 2, 2), (6, 6, 2, 2, 2), (6, 4, 4, 4),
        (4, 4, 2, 2),
    }
    assert len(table.labels) == 11


def test_e6_generator_row():
    table = sporadic_table("sl3_9_e6")
    assert shorts(table.rows["g"]) == {(4, 2), (7, 2), (7, 5)}
    assert table.rows["g2"] == table.rows["g"]


def test_sp20_derived_tables():
    sp20 = sporadic_table("sl6_6_sp20")
    ext = extension_branching(sp20)
    assert ext.labels == ["1", "sigma", "psi"]
    assert ext.rows["1"] == sp20.rows["Λ0"] + sp20.rows["Λ6"]
    tr = transpose_branching(sp20)
    assert tr.labels == [f"X{j}" for j in range(11)]
    assert shorts(tr.rows["X0"]) == {(), (6, 6), (6, 6, 6, 6), (6, 3, 3), (6, 6, 6, 3, 3), (6, 3, 3, 3, 3), (4, 4, 2, 2)}
    assert sum(tr.rows["X0"].values()) == 7
    assert {(3,), (6, 6, 3), (6, 6, 6, 6, 3)} <= shorts(tr.rows["X9"])
    with pytest.raises(ValueError):
        transpose_branching(ext)


@pytest.mark.parametrize("table_id,n", [("plus2", 3), ("plus2", 4), ("minus2", 5), ("adjoint", 4), ("sl3_9_e6", None)])
def test_consistency(table_id, n):
    report = consistency_check(get_table(table_id, n))
    assert report["ok"], report
    assert report["grading"]


def test_pointed_locals_flagged():
    report = consistency_check(branch_plus2(3))
    assert report["pointed_locals"] is True
    assert report["dim_algebra"] > 1


def test_local_twists_uniform():
    twists = local_twists(branch_plus2(3))
    assert set(twists) == set(branch_plus2(3).labels)


def test_mixed_twists_rejected():
    ctx = LevelRank(3, 5)
    bad = BranchingTable("bad", ctx, ["1"], {"1": Counter([weight(ctx), weight(ctx, [1])])})
    with pytest.raises(CheckFailure):
        local_twists(bad)


def test_grading_detects_split_row():
    ctx = LevelRank(3, 5)
    rows = {"1": Counter([weight(ctx)]), "x": Counter([weight(ctx, [1]), weight(ctx, [2])])}
    assert not grading_check(BranchingTable("split", ctx, ["1", "x"], rows))


def test_type_one_invariant_is_physical(md):
    table = branch_plus2(3)
    z = type_one(table.ctx, branching_matrix(table))
    assert is_physical(z, md(3, 5))["physical"]


def test_get_table_errors():
    with pytest.raises(ValueError):
        get_table("plus2")
    with pytest.raises(KeyError):
        get_table("sl9_9_nothing")
    assert "sp20_ext" in TABLE_IDS


def test_table_json():
    obj = sporadic_table("sl3_9_e6").to_json()
    assert obj["embedding"] == "sl3_9_e6"
    assert obj["rows"][0]["weights"][0] == [[], 1]
