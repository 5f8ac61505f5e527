import pytest

from fusionmod.arith import eligible_m
from fusionmod.cosets import (
    EXCEPTIONAL_GROUPS,
    EXCEPTIONAL_TRIPLES,
    algebra_coset_table,
    brute_force_coset_count,
    closure,
    coset_count,
    cyclic_model,
    dihedral_model,
    double_cosets,
    eqbr_description,
    exceptional_coset_count,
    generate,
    image_generator_invariance,
    perm,
    pointed_coset_count,
    pointed_group_model,
    with_subgroup,
)


def test_closure_orders():
    s4 = generate([perm([[1, 2]], 4), perm([[1, 2, 3, 4]], 4)], 4, "S4")
    assert s4.order == 24
    alt5 = generate([perm([[1, 2, 3]], 5), perm([[3, 4, 5]], 5)], 5, "Alt5")
    assert alt5.order == 60
    assert closure([], 0, lambda a, b: a + b) == [0]


def test_double_cosets_basics():
    s4 = generate([perm([[1, 2]], 4), perm([[1, 2, 3, 4]], 4)], 4)
    assert double_cosets(s4) == 24
    assert double_cosets(s4, s4.elements) == 1


def test_subgroup_must_lie_in_group():
    z3 = generate([perm([[1, 2, 3]], 4)], 4)
    with pytest.raises(ValueError):
        with_subgroup(z3, [perm([[1, 2]], 4)])


def test_model_orders():
    assert dihedral_model(3, 1).order == 12
    assert len(dihedral_model(3, 1).subgroup) == 3
    assert cyclic_model(4, 2).order == 16
    assert cyclic_model(1, 0).order == 1


@pytest.mark.parametrize("n,k,m,want", [(6, 6, 3, 4), (5, 4, 1, 4), (2, 2, 1, 1), (6, 6, 1, 4)])
def test_pointed_counts(n, k, m, want):
    assert pointed_coset_count(n, k, m) == want


@pytest.mark.parametrize("n,k", [(6, 6), (5, 4), (4, 4), (2, 3), (3, 6), (8, 10), (9, 3), (12, 6)])
def test_formula_matches_brute_force(n, k):
    for m in eligible_m(n, k):
        if (n, k, m) in EXCEPTIONAL_TRIPLES:
            continue
        assert pointed_coset_count(n, k, m) == brute_force_coset_count(n, k, m), m


def test_exceptional_triples_refused_by_pointed_path():
    with pytest.raises(ValueError):
        pointed_coset_count(3, 9, 3)
    with pytest.raises(ValueError):
        pointed_group_model(5, 5, 5)


@pytest.mark.parametrize("triple,want", [((3, 9, 3), 4), ((4, 8, 4), 3), ((5, 5, 5), 4)])
def test_exceptional_counts(triple, want):
    assert exceptional_coset_count(*triple) == want
    assert coset_count(*triple) == want


def test_exceptional_without_model():
    assert coset_count(8, 4, 4) == 2
    with pytest.raises(ValueError):
        coset_count(2, 16, 2)
    with pytest.raises(ValueError):
        exceptional_coset_count(8, 4, 4)


@pytest.mark.parametrize("triple", sorted(EXCEPTIONAL_GROUPS))
def test_image_generator_choice_irrelevant(triple):
    name, (degree, gens), image = EXCEPTIONAL_GROUPS[triple]
    g = generate([perm(c, degree) for c in gens], degree, name)
    assert image_generator_invariance(g, perm([image[0]], degree))


def test_generator_invariance_for_pointed_model():
    g = pointed_group_model(6, 6, 3)
    assert image_generator_invariance(g, g.subgroup[1])


@pytest.mark.parametrize("j", [0, 1, 2])
def test_generator_invariance_trivial_image(j):
    g = dihedral_model(1, j)
    assert g.subgroup == [g.elements[0]]
    assert image_generator_invariance(g, g.elements[0])


@pytest.mark.parametrize("n,k,total", [(6, 6, 16), (7, 7, 10), (3, 5, 6), (5, 5, 12), (4, 8, 9)])
def test_algebra_table_totals(n, k, total):
    assert sum(r.count for r in algebra_coset_table(n, k)) == total


def test_algebra_table_rejects_generic_pair():
    with pytest.raises(KeyError):
        algebra_coset_table(5, 4)


def test_eqbr_descriptions():
    assert eqbr_description(6, 6, 3) == "D3 x Z2^1"
    assert eqbr_description(2, 2, 1) == "trivial"
    assert eqbr_description(3, 9, 3) == "S4"
