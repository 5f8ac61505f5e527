import numpy as np
import pytest

from fusionmod.alcove import LevelRank, enumerate_alcove, weight
from fusionmod.arith import divisor_domain
from fusionmod.errors import OverflowRisk
from fusionmod.invariants import (
    MINUS,
    PLUS,
    IntMatrix,
    combination,
    decompose,
    decompose_dependent,
    equals,
    family_labels,
    generic_family,
    heterotic,
    matmul,
    rational_rank,
    scale,
    tensor_rule,
    twisted,
    type_one,
    verify_tensor_rule,
    z_charge,
    z_plus,
    z_plus_closed,
    z_pointed,
)


@pytest.mark.parametrize("n,k", [(2, 1), (3, 3), (6, 6), (5, 4), (6, 7)])
def test_z1_plus_is_identity(n, k):
    assert z_plus(n, k, 1) == IntMatrix.identity(LevelRank(n, k))


@pytest.mark.parametrize("n,k", [(6, 6), (4, 4), (3, 3), (5, 5), (9, 3), (6, 7), (8, 4), (4, 6)])
def test_closed_form_matches_delta_sum(n, k):
    for d in divisor_domain(n, k):
        assert z_plus(n, k, d) == z_plus_closed(n, k, d), f"d={d}"


@pytest.mark.slow
def test_closed_form_matches_delta_sum_sweep():
    for n in range(2, 9):
        for k in range(1, 9):
            for d in divisor_domain(n, k):
                assert z_plus(n, k, d) == z_plus_closed(n, k, d), (n, k, d)


def test_z6_vacuum_row_is_simple_current_orbit(ctx66, alcove66):
    z = z_plus(6, 6, 6)
    want = sorted(alcove66.index_of(weight(ctx66, rows)) for rows in ([], [6, 6], [6, 6, 6, 6]))
    assert z.row_support(0) == want
    assert z[0, 0] == 1


def test_charge_conjugation_is_involution():
    c = z_charge(3, 3)
    assert matmul(c, c) == IntMatrix.identity(LevelRank(3, 3))


def test_charge_conjugation_entry():
    ctx = LevelRank(3, 3)
    index = enumerate_alcove(ctx)
    c = z_charge(3, 3)
    i, j = index.index_of(weight(ctx, [1])), index.index_of(weight(ctx, [1, 1]))
    assert c[i, j] == 1
    assert c[i, i] == 0


def test_minus_is_charge_times_plus():
    assert z_pointed(6, 6, 3, MINUS) == matmul(z_charge(6, 6), z_plus(6, 6, 3))


def test_bad_arguments():
    with pytest.raises(ValueError):
        z_plus(6, 6, 4)
    with pytest.raises(ValueError):
        z_pointed(6, 6, 1, 0)
    with pytest.raises(ValueError):
        matmul(IntMatrix.identity(LevelRank(3, 3)), IntMatrix.identity(LevelRank(2, 8)))
    with pytest.raises(ValueError):
        IntMatrix(LevelRank(3, 3), np.eye(2))


@pytest.mark.parametrize(
    "args,want",
    [
        ((2, PLUS, 2, PLUS), (1, 1, PLUS)),
        ((3, PLUS, 3, PLUS), (3, 3, PLUS)),
        ((2, PLUS, 3, MINUS), (1, 6, MINUS)),
        ((6, MINUS, 6, MINUS), (3, 3, PLUS)),
    ],
)
def test_tensor_rule_examples(args, want):
    assert tensor_rule(6, 6, *args) == want


@pytest.mark.parametrize("n,k", [(6, 6), (4, 4), (5, 5)])
def test_tensor_rule_on_matrices(n, k):
    report = verify_tensor_rule(n, k)
    assert report["ok"], report["failures"][:3]
    assert report["pairs"] == len(generic_family(n, k)) ** 2


def test_overflow_guard():
    big = scale(IntMatrix.identity(LevelRank(2, 1)), 2 ** 62)
    with pytest.raises(OverflowRisk):
        matmul(big, big)


def test_rank_of_repeated_matrix():
    eye = IntMatrix.identity(LevelRank(3, 2))
    assert rational_rank([eye, eye]) == (1, [[1, -1]])
    assert rational_rank([]) == (0, [])


@pytest.mark.parametrize("n,k,rank", [(3, 3, 3), (3, 6, 3), (5, 5, 3), (6, 3, 3), (4, 4, 5), (6, 6, 8)])
def test_generic_family_rank(n, k, rank):
    assert rational_rank(list(generic_family(n, k).values()))[0] == rank


def test_level_four_relation():
    z = {(d, s): z_pointed(4, 4, d, s) for d in (2, 4) for s in (PLUS, MINUS)}
    assert not equals(z[(2, PLUS)], z[(2, MINUS)])
    assert not equals(z[(4, PLUS)], z[(4, MINUS)])
    lhs = combination([z[(2, PLUS)], z[(4, PLUS)]], [1, 1])
    rhs = combination([z[(2, MINUS)], z[(4, MINUS)]], [1, 1])
    assert equals(lhs, rhs)


def test_decompose_product_in_generic_basis():
    family = generic_family(6, 6)
    keys = list(family)
    coeffs = decompose(matmul(family[(3, PLUS)], family[(3, PLUS)]), [family[x] for x in keys])
    assert coeffs == [3 if x == (3, PLUS) else 0 for x in keys]


def test_decompose_rejects_fractional_coefficients():
    eye = IntMatrix.identity(LevelRank(3, 2))
    assert decompose(scale(eye, 3), [eye]) == [3]
    assert decompose(eye, [scale(eye, 2)]) is None
    with pytest.raises(ValueError):
        decompose(eye, [eye, eye])


def test_decompose_dependent_zero_fills():
    eye = IntMatrix.identity(LevelRank(3, 2))
    assert decompose_dependent(scale(eye, 2), [eye, eye]) == [2, 0]


def test_branching_products():
    ctx = LevelRank(2, 1)
    n = np.eye(2, dtype=np.int64)
    assert type_one(ctx, n) == IntMatrix.identity(ctx)
    swap = twisted(ctx, n, [1, 0])
    assert swap.triplets() == [[0, 1, 1], [1, 0, 1]]
    assert heterotic(ctx, n, [1, 0], n) == swap


def test_matrix_json_and_labels():
    eye = IntMatrix.identity(LevelRank(2, 1))
    assert eye.to_json() == {"n": 2, "k": 1, "format": "triplets", "entries": [[0, 0, 1], [1, 1, 1]]}
    assert family_labels([(1, PLUS), (2, MINUS)]) == ["Z(1,+)", "Z(2,-)"]
    assert equals(eye, eye.transpose())
