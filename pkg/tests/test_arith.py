from fractions import Fraction

import pytest

from fusionmod.arith import (
    canonical_sign,
    count_identity_check,
    d_from_m_and_sign,
    d_profile,
    distinguishing_primes,
    divisor_domain,
    divisors,
    eligible_m,
    factorize,
    khat,
    m_of_d,
    modsc_params,
    p_t_exponents,
    sigma,
    sign_classes,
    sign_equiv,
    sign_vector_of_d,
)

PLUS, MINUS = 1, -1


def test_basic_number_theory():
    assert factorize(12) == ((2, 2), (3, 1))
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert sigma(6) == 4
    assert sigma(1) == 1
    with pytest.raises(ValueError):
        divisors(0)


@pytest.mark.parametrize("n,k,want", [(3, 3, 6), (6, 6, 6), (3, 4, 4)])
def test_khat(n, k, want):
    assert khat(n, k) == want


@pytest.mark.parametrize("n,k,d,want", [(6, 6, 3, 3), (6, 6, 2, 1), (5, 5, 5, 5), (6, 6, 1, 1)])
def test_m_of_d(n, k, d, want):
    assert m_of_d(n, k, d) == want


def test_sign_vectors_at_6_6():
    assert sign_vector_of_d(6, 6, 2) == {2: MINUS, 3: PLUS}
    assert sign_vector_of_d(6, 6, 3) == {2: PLUS, 3: PLUS}


def test_sign_classes_at_6_6():
    # the 3-adic sign is irrelevant for m = 1, the 2-adic one is not
    assert distinguishing_primes(6, 6, 1) == [2]
    assert sign_equiv(6, 6, 1, {2: MINUS, 3: PLUS}, {2: MINUS, 3: MINUS})
    assert not sign_equiv(6, 6, 1, {2: PLUS, 3: PLUS}, {2: MINUS, 3: PLUS})
    assert len(sign_classes(6, 6, 1)) == 2
    assert canonical_sign(6, 6, 1, {2: MINUS, 3: MINUS}) == {2: MINUS, 3: PLUS}


@pytest.mark.parametrize("n,k", [(6, 6), (4, 4), (12, 6), (9, 3), (8, 10), (5, 5), (6, 7)])
def test_divisor_sign_round_trip(n, k):
    for d in divisor_domain(n, k):
        m = m_of_d(n, k, d)
        assert d_from_m_and_sign(n, k, m, sign_vector_of_d(n, k, d)) == d


@pytest.mark.parametrize("n,k", [(6, 6), (4, 4), (12, 6), (9, 3), (8, 10), (10, 5)])
def test_classes_match_divisors(n, k):
    domain = divisor_domain(n, k)
    for m in eligible_m(n, k):
        assert len(sign_classes(n, k, m)) == sum(1 for d in domain if m_of_d(n, k, d) == m)


def test_p_t_examples_explicit():
    assert p_t_exponents(6, 6, 1) == (0, 1)
    assert p_t_exponents(6, 6, 3) == (0, 1)
    assert p_t_exponents(5, 4, 1) == (1, 0)
    with pytest.raises(ValueError):
        p_t_exponents(6, 6, 2)


def test_eligible_m():
    assert eligible_m(6, 6) == [1, 3]
    assert eligible_m(4, 8) == [1, 2, 4]
    assert eligible_m(3, 1) == [1]


@pytest.mark.parametrize("n,k", [(6, 6), (3, 1), (2, 2), (6, 7), (12, 18), (16, 2)])
def test_count_identity_examples(n, k):
    assert count_identity_check(n, k)


def test_count_identity_small_sweep():
    assert all(count_identity_check(n, k) for n in range(2, 21) for k in range(1, 21))


@pytest.mark.slow
def test_count_identity_full_range():
    bad = [(n, k) for n in range(2, 61) for k in range(1, 61) if not count_identity_check(n, k)]
    assert bad == []


def test_divisor_domain_parity():
    assert divisor_domain(6, 7) == [1, 3]
    assert divisor_domain(6, 6) == [1, 2, 3, 6]
    assert divisor_domain(5, 4) == [1, 5]


def test_modsc_params():
    assert modsc_params(6, 6, 3, MINUS) == (Fraction(2, 3), 1, -2)
    assert modsc_params(6, 6, 2, MINUS) == (Fraction(3, 2), 1, -2)
    assert modsc_params(6, 6, 3, PLUS)[2] == 0
    with pytest.raises(ValueError):
        modsc_params(6, 6, 5, MINUS)


def test_d_profile_json():
    assert d_profile(6, 6, 3).to_json() == {
        "n": 6, "k": 6, "d": 3, "m": 3,
        "signs": {"2": "+", "3": "+"},
        "p_m": 0, "t_m": 1,
    }
