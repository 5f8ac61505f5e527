"""
Divisor and prime-exponent arithmetic behind the pointed module categories.

Notation per prime p:  nu = v_p(N), kappa = v_p(k), delta = v_p(d), mu = v_p(m).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Tuple

from sympy import divisor_count, factorint
from sympy import divisors as _sympy_divisors

Factorization = Tuple[Tuple[int, int], ...]
SignVector = Dict[int, int]


# ---- Basic number theory ----

def _positive(n: int) -> int:
    n = int(n)
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    return n


def factorize(n: int) -> Factorization:
    return tuple(sorted(factorint(_positive(n)).items()))


def divisors(n: int) -> List[int]:
    return [int(x) for x in _sympy_divisors(_positive(n))]


def sigma(n: int) -> int:
    """Number of divisors."""
    return int(divisor_count(_positive(n)))


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def primes_of(n: int) -> List[int]:
    return [p for p, _ in factorize(n)]


def khat(n: int, k: int) -> int:
    return k + n if (n * k) % 2 == 1 else k


# ---- m_d and sign vectors ----

def m_of_d(n: int, k: int, d: int) -> int:
    if d < 1 or n % d:
        raise ValueError(f"d={d} does not divide N={n}")
    if n % 2:
        return gcd(d, n * k // d)
    if (n * k) % (2 * d):
        raise ValueError(f"Nk/(2d) is not an integer for N={n}, k={k}, d={d}")
    return gcd(d, n * k // (2 * d))


def sign_vector_of_d(n: int, k: int, d: int) -> SignVector:
    m = m_of_d(n, k, d)
    return {p: (1 if valuation(d, p) == valuation(m, p) else -1) for p in primes_of(n)}


def is_eligible_m(n: int, k: int, m: int) -> bool:
    if m < 1 or n % m:
        return False
    return (n * k) % (m * m) == 0 if n % 2 else (n * k) % (2 * m * m) == 0


def eligible_m(n: int, k: int) -> List[int]:
    return [m for m in divisors(n) if is_eligible_m(n, k, m)]


def _is_distinguishing(n: int, k: int, m: int, p: int) -> bool:
    nu, ka, mu = valuation(n, p), valuation(k, p), valuation(m, p)
    if p == 2 and n % 2 == 0:
        return ka <= mu + 1 and 2 * mu + 1 < nu + ka
    return ka <= mu and 2 * mu < nu + ka


def distinguishing_primes(n: int, k: int, m: int) -> List[int]:
    """Primes of N at which the sign separates two divisors sharing m_d = m."""
    return [p for p in primes_of(n) if _is_distinguishing(n, k, m, p)]


def canonical_sign(n: int, k: int, m: int, a: SignVector) -> SignVector:
    keep = set(distinguishing_primes(n, k, m))
    return {p: (a.get(p, 1) if p in keep else 1) for p in primes_of(n)}


def sign_equiv(n: int, k: int, m: int, a: SignVector, b: SignVector) -> bool:
    return canonical_sign(n, k, m, a) == canonical_sign(n, k, m, b)


def sign_classes(n: int, k: int, m: int) -> List[SignVector]:
    """Canonical representatives of 2^P / ~_m."""
    dist = distinguishing_primes(n, k, m)
    out = []
    for choice in itertools.product((1, -1), repeat=len(dist)):
        a = {p: 1 for p in primes_of(n)}
        a.update(zip(dist, choice))
        out.append(a)
    return out


def d_from_m_and_sign(n: int, k: int, m: int, a: SignVector) -> int:
    if not is_eligible_m(n, k, m):
        raise ValueError(f"m={m} is not eligible for N={n}, k={k}")
    a = canonical_sign(n, k, m, a)
    d = m
    for p, s in a.items():
        if s == 1:
            continue
        e = valuation(n, p) + valuation(k, p) - 2 * valuation(m, p)
        if p == 2 and n % 2 == 0:
            e -= 1
        d *= p ** e
    if n % d or m_of_d(n, k, d) != m:
        raise ValueError(f"no divisor of N={n} realises m={m}, signs={a}")
    return d


def divisor_domain(n: int, k: int) -> List[int]:
    """Divisors parametrising the generic module categories."""
    if n % 2 == 0 and k % 2 == 1:
        return divisors(n // 2)
    return divisors(n)


# ---- Counting exponents ----

def p_t_exponents(n: int, k: int, m: int) -> Tuple[int, int]:
    if not is_eligible_m(n, k, m):
        raise ValueError(f"m={m} is not eligible for N={n}, k={k}")
    mp = gcd(m, k)
    a = Fraction(n * mp, m * m)
    if a.denominator != 1:
        raise ValueError(f"N m'/m^2 = {a} is not an integer (N={n}, k={k}, m={m})")
    a_int, b = a.numerator, k // mp
    p_m = sum(1 for p in primes_of(a_int) if p % 2 and b % p)
    if a_int % 2 == 1 or b % 4 == 0 or (a_int % 4 == 2 and b % 2 == 1):
        t_m = 0
    else:
        t_m = 1
    return p_m, t_m


def count_identity_check(n: int, k: int) -> bool:
    lhs = sum(2 ** sum(p_t_exponents(n, k, m)) for m in eligible_m(n, k))
    rhs = sigma(n // 2) if (n % 2 == 0 and k % 2 == 1) else sigma(n)
    return lhs == rhs


# ---- Shift parameters of the pointed invariants ----

def modsc_params(n: int, k: int, p: int, sign: int) -> Tuple[Fraction, int, int]:
    if n % p:
        raise ValueError(f"p={p} does not divide N={n}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    nu, ka = valuation(n, p), valuation(k, p)
    n_p = Fraction(n, p ** (nu + ka))
    nk = n_p * k
    if nk.denominator != 1 or nk.numerator % p == 0:
        raise AssertionError(f"N_p k = {nk} must be an integer prime to {p}")
    ell = pow(nk.numerator, -1, p ** nu)
    return n_p, ell, (0 if sign == 1 else -2)


# ---- Profiles ----

@dataclass(frozen=True)
class DivisorProfile:
    n: int
    k: int
    d: int
    m: int
    signs: Tuple[Tuple[int, int], ...]
    p_m: int
    t_m: int

    @property
    def sign_vector(self) -> SignVector:
        return dict(self.signs)

    def to_json(self) -> dict:
        return {
            "n": self.n, "k": self.k, "d": self.d, "m": self.m,
            "signs": {str(p): ("+" if s == 1 else "-") for p, s in self.signs},
            "p_m": self.p_m, "t_m": self.t_m,
        }


def d_profile(n: int, k: int, d: int) -> DivisorProfile:
    m = m_of_d(n, k, d)
    p_m, t_m = p_t_exponents(n, k, m)
    return DivisorProfile(n, k, d, m, tuple(sorted(sign_vector_of_d(n, k, d).items())), p_m, t_m)
