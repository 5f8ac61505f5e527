#!/usr/bin/env python
"""
Modular invariant matrices indexed by the alcove.

  - IntMatrix: CSR int64 (scipy.sparse) with checked products
  - Z(d,+) from the delta-sum formula and from the closed orbit formula (must agree)
  - the charge conjugation matrix Z(1,-) and Z(d,-) = Z(1,-) Z(d,+)
  - exact rank / dependencies / decomposition through integer Gram matrices (sympy)
  - invariants built from algebra branching data: n n^T, n F n^T, n_A F n_B^T
  - the generic tensor rule Z(d1,e1) Z(d2,e2) = gcd(m1,m2) Z(d,e1 e2)
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import sympy

from fusionmod.alcove import AlcoveIndex, LevelRank, enumerate_alcove
from fusionmod.arith import (
    d_from_m_and_sign,
    divisor_domain,
    khat,
    m_of_d,
    modsc_params,
    sign_vector_of_d,
)
from fusionmod.errors import OverflowRisk

logger = logging.getLogger(__name__)

PRODUCT_BOUND = 2 ** 62
PLUS, MINUS = 1, -1


# ---------------------------------- IntMatrix ----------------------------------


class IntMatrix:
    """Square nonnegative integer matrix over one alcove, stored as CSR int64."""

    def __init__(self, ctx: LevelRank, data: sp.spmatrix):
        size = len(enumerate_alcove(ctx))
        if data.shape != (size, size):
            raise ValueError(f"shape {data.shape} does not match alcove size {size}")
        self.ctx = ctx
        self.data = sp.csr_matrix(data, dtype=np.int64)
        self.data.sum_duplicates()
        self.data.eliminate_zeros()

    @property
    def index(self) -> AlcoveIndex:
        return enumerate_alcove(self.ctx)

    @property
    def size(self) -> int:
        return self.data.shape[0]

    @classmethod
    def from_triplets(cls, ctx: LevelRank, rows, cols, vals=None) -> "IntMatrix":
        size = len(enumerate_alcove(ctx))
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.ones(len(rows), dtype=np.int64) if vals is None else np.asarray(vals, dtype=np.int64)
        return cls(ctx, sp.coo_matrix((vals, (rows, cols)), shape=(size, size)))

    @classmethod
    def identity(cls, ctx: LevelRank) -> "IntMatrix":
        return cls(ctx, sp.identity(len(enumerate_alcove(ctx)), dtype=np.int64, format="csr"))

    @classmethod
    def permutation(cls, ctx: LevelRank, perm: np.ndarray) -> "IntMatrix":
        return cls.from_triplets(ctx, np.arange(len(perm)), perm)

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        return int(self.data[ij])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntMatrix) and equals(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"IntMatrix(N={self.ctx.n}, k={self.ctx.k}, nnz={self.data.nnz})"

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.ctx, self.data.T)

    def is_symmetric(self) -> bool:
        return (self.data != self.data.T).nnz == 0

    def min_entry(self) -> int:
        return int(self.data.data.min()) if self.data.nnz else 0

    def row_support(self, i: int) -> List[int]:
        row = self.data.getrow(i)
        return sorted(int(j) for j in row.indices)

    def triplets(self) -> List[List[int]]:
        coo = self.data.tocoo()
        out = sorted(zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()))
        return [[int(i), int(j), int(v)] for i, j, v in out]

    def dense(self) -> np.ndarray:
        return self.data.toarray()

    def to_json(self) -> dict:
        return {"n": self.ctx.n, "k": self.ctx.k, "format": "triplets", "entries": self.triplets()}


def _same_index(a: IntMatrix, b: IntMatrix) -> None:
    if a.ctx != b.ctx:
        raise ValueError(f"matrices over different alcoves: {a.ctx} vs {b.ctx}")


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    _same_index(a, b)
    ra = abs(a.data).sum(axis=1).max() if a.data.nnz else 0
    cb = abs(b.data).sum(axis=0).max() if b.data.nnz else 0
    if int(ra) * int(cb) >= PRODUCT_BOUND:
        raise OverflowRisk(f"product bound {int(ra)}*{int(cb)} exceeds int64 headroom")
    return IntMatrix(a.ctx, a.data @ b.data)


def add(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    _same_index(a, b)
    return IntMatrix(a.ctx, a.data + b.data)


def scale(a: IntMatrix, c: int) -> IntMatrix:
    return IntMatrix(a.ctx, a.data * int(c))


def equals(a: IntMatrix, b: IntMatrix) -> bool:
    return a.ctx == b.ctx and (a.data != b.data).nnz == 0


# ------------------------------ Pointed invariants -----------------------------


def _check_d(n: int, k: int, d: int) -> None:
    if d not in divisor_domain(n, k):
        raise ValueError(f"d={d} is not an eligible divisor for N={n}, k={k}")


def _tau_table(index: AlcoveIndex) -> np.ndarray:
    """Row j is the permutation of tau^j."""
    return np.stack([index.tau_power_perm(j) for j in range(index.ctx.n)])


def z_plus(n: int, k: int, d: int) -> IntMatrix:
    """Delta-sum form: sum over i of [d | t + N i khat/(2d)] at column tau^(iN/d)(lambda)."""
    _check_d(n, k, d)
    ctx = LevelRank(n, k)
    index = enumerate_alcove(ctx)
    kh = khat(n, k)
    boxes = index.boxes
    rows_out, cols_out = [], []
    for i in range(1, d + 1):
        shift = Fraction(n * i * kh, 2 * d)
        if shift.denominator != 1:
            continue
        ok = (boxes + shift.numerator) % d == 0
        rows = np.nonzero(ok)[0]
        rows_out.append(rows)
        cols_out.append(index.tau_power_perm(i * n // d)[rows])
    if not rows_out:
        return IntMatrix.from_triplets(ctx, [], [])
    return IntMatrix.from_triplets(ctx, np.concatenate(rows_out), np.concatenate(cols_out))


def tau_shift_exponents(n: int, k: int, d: int, boxes: np.ndarray) -> np.ndarray:
    """Sum over negative primes of -2 t l_p N_p, reduced mod N; each term must be integral."""
    signs = sign_vector_of_d(n, k, d)
    total = np.zeros(len(boxes), dtype=np.int64)
    for p, s in signs.items():
        if s == PLUS:
            continue
        n_p, ell, h = modsc_params(n, k, p, s)
        num = h * ell * n_p.numerator * boxes
        if np.any(num % n_p.denominator):
            raise ValueError(f"non-integral tau exponent at p={p} for N={n}, k={k}, d={d}")
        total = (total + num // n_p.denominator) % n
    return total


def z_plus_closed(n: int, k: int, d: int) -> IntMatrix:
    """Closed form: rows with m_d | t, columns the Z_m orbit of the shifted weight."""
    _check_d(n, k, d)
    ctx = LevelRank(n, k)
    index = enumerate_alcove(ctx)
    m = m_of_d(n, k, d)
    rows = np.nonzero(index.boxes % m == 0)[0]
    shift = tau_shift_exponents(n, k, d, index.boxes[rows])
    table = _tau_table(index)
    step = n // m
    rows_out = np.tile(rows, m)
    cols_out = np.concatenate([table[(shift + j * step) % n, rows] for j in range(m)])
    return IntMatrix.from_triplets(ctx, rows_out, cols_out)


def z_charge(n: int, k: int) -> IntMatrix:
    ctx = LevelRank(n, k)
    return IntMatrix.permutation(ctx, enumerate_alcove(ctx).dual_perm)


def z_minus(n: int, k: int, d: int) -> IntMatrix:
    return matmul(z_charge(n, k), z_plus(n, k, d))


def z_pointed(n: int, k: int, d: int, sign: int) -> IntMatrix:
    if sign not in (PLUS, MINUS):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return z_plus(n, k, d) if sign == PLUS else z_minus(n, k, d)


def generic_family(n: int, k: int) -> Dict[Tuple[int, int], IntMatrix]:
    """Z(d,+) then Z(d,-) for every d in the divisor domain, ascending d."""
    out: Dict[Tuple[int, int], IntMatrix] = {}
    for sign in (PLUS, MINUS):
        for d in divisor_domain(n, k):
            out[(d, sign)] = z_pointed(n, k, d, sign)
    return out


# -------------------------------- Tensor rule ----------------------------------


def tensor_rule(n: int, k: int, d1: int, s1: int, d2: int, s2: int) -> Tuple[int, int, int]:
    """(multiplicity, d, sign) with Z(d1,s1) Z(d2,s2) = multiplicity * Z(d,sign)."""
    m1, m2 = m_of_d(n, k, d1), m_of_d(n, k, d2)
    a1, a2 = sign_vector_of_d(n, k, d1), sign_vector_of_d(n, k, d2)
    m = m1 * m2 // gcd(m1, m2)
    d = d_from_m_and_sign(n, k, m, {p: a1[p] * a2[p] for p in a1})
    return gcd(m1, m2), d, s1 * s2


def verify_tensor_rule(n: int, k: int) -> dict:
    family = generic_family(n, k)
    failures = []
    for (d1, s1), z1 in family.items():
        for (d2, s2), z2 in family.items():
            mult, d, s = tensor_rule(n, k, d1, s1, d2, s2)
            if not equals(matmul(z1, z2), scale(family[(d, s)], mult)):
                failures.append({"left": [d1, s1], "right": [d2, s2], "predicted": [mult, d, s]})
    logger.debug("tensor rule N=%d k=%d: %d pairs, %d failures", n, k, len(family) ** 2, len(failures))
    return {"n": n, "k": k, "pairs": len(family) ** 2, "failures": failures, "ok": not failures}


# ------------------------------ Exact linear algebra ---------------------------


def gram_matrix(mats: Sequence[IntMatrix]) -> sympy.Matrix:
    g = [[0] * len(mats) for _ in mats]
    for i, a in enumerate(mats):
        for j in range(i, len(mats)):
            v = int(a.data.multiply(mats[j].data).sum())
            g[i][j] = g[j][i] = v
    return sympy.Matrix(g)


def _integer_vector(vec: sympy.Matrix) -> List[int]:
    den = reduce(sympy.ilcm, [sympy.Rational(x).q for x in vec], 1)
    ints = [int(x * den) for x in vec]
    g = reduce(gcd, ints, 0) or 1
    ints = [x // g for x in ints]
    first = next((x for x in ints if x), 0)
    return [-x for x in ints] if first < 0 else ints


def rational_rank(mats: Sequence[IntMatrix]) -> Tuple[int, List[List[int]]]:
    """Rank over Q of the flattened matrices and an integer basis of their linear dependencies."""
    if not mats:
        return 0, []
    g = gram_matrix(mats)
    deps = [_integer_vector(v) for v in g.nullspace()]
    return g.rank(), deps


def combination(mats: Sequence[IntMatrix], coeffs: Sequence[int]) -> IntMatrix:
    acc = sp.csr_matrix(mats[0].data.shape, dtype=np.int64)
    for c, a in zip(coeffs, mats):
        if c:
            acc = acc + a.data * int(c)
    return IntMatrix(mats[0].ctx, acc)


class Basis:
    """Independent family with its Gram matrix computed once."""

    def __init__(self, mats: Sequence[IntMatrix]):
        self.mats = list(mats)
        self.gram = gram_matrix(self.mats)
        if self.gram.rank() < len(self.mats):
            raise ValueError("decompose needs a linearly independent basis")

    def coefficients(self, target: IntMatrix) -> Optional[List[int]]:
        """Nonnegative integer coefficients c with target = sum c_i basis_i, or None."""
        rhs = sympy.Matrix([int(a.data.multiply(target.data).sum()) for a in self.mats])
        sol = self.gram.LUsolve(rhs)
        if any(not x.is_integer or x < 0 for x in sol):
            logger.debug("decompose: coefficients %s not in N", list(sol))
            return None
        coeffs = [int(x) for x in sol]
        if not equals(combination(self.mats, coeffs), target):
            logger.debug("decompose: target not in the span")
            return None
        return coeffs


def decompose(target: IntMatrix, basis: Sequence[IntMatrix]) -> Optional[List[int]]:
    return Basis(basis).coefficients(target)


def decompose_dependent(target: IntMatrix, basis: Sequence[IntMatrix]) -> Optional[List[int]]:
    """As decompose, over the first maximal independent subfamily; other coefficients are 0."""
    chosen: List[int] = []
    for i in range(len(basis)):
        trial = chosen + [i]
        if gram_matrix([basis[j] for j in trial]).rank() == len(trial):
            chosen = trial
    coeffs = decompose(target, [basis[j] for j in chosen])
    if coeffs is None:
        return None
    full = [0] * len(basis)
    for j, c in zip(chosen, coeffs):
        full[j] = c
    return full


# ------------------------- Invariants from branching data ----------------------


def _rect(nmat) -> sp.csr_matrix:
    return sp.csr_matrix(nmat, dtype=np.int64)


def type_one(ctx: LevelRank, nmat) -> IntMatrix:
    n = _rect(nmat)
    return IntMatrix(ctx, n @ n.T)


def _perm_matrix(perm: Sequence[int]) -> sp.csr_matrix:
    size = len(perm)
    return sp.csr_matrix((np.ones(size, dtype=np.int64), (np.arange(size), np.asarray(perm))), shape=(size, size))


def twisted(ctx: LevelRank, nmat, perm: Sequence[int]) -> IntMatrix:
    """n F n^T with F the braided autoequivalence given as a permutation of local labels."""
    n = _rect(nmat)
    return IntMatrix(ctx, n @ _perm_matrix(perm) @ n.T)


def heterotic(ctx: LevelRank, n_a, perm: Sequence[int], n_b) -> IntMatrix:
    a, b = _rect(n_a), _rect(n_b)
    return IntMatrix(ctx, a @ _perm_matrix(perm) @ b.T)


def family_labels(keys: Iterable[Tuple[int, int]]) -> List[str]:
    return [f"Z({d},{'+' if s == PLUS else '-'})" for d, s in keys]
