#!/usr/bin/env python
"""
Alcove combinatorics for C(sl_N, k).

Simple objects are Young diagrams in an (N-1) x k box. Everything here is a pure
function of immutable inputs:
  - enumeration in graded-lex order (box count, then rows descending), empty diagram first
  - Dynkin conversion, duality, the simple-current map tau
  - Z_N orbits / stabilisers, D_N stabiliser test
  - quantum dimensions (float and mpmath), exact conformal weights, central charge
  - the level-rank transpose used for sl_6 level 6
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

# ---------------------------------- Types ------------------------------------


@dataclass(frozen=True)
class LevelRank:
    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 2 or self.k < 1:
            raise ValueError(f"need N >= 2 and k >= 1, got N={self.n}, k={self.k}")

    @property
    def kappa(self) -> int:
        return self.n + self.k


@dataclass(frozen=True, order=False)
class AlcoveWeight:
    rows: Tuple[int, ...]
    ctx: LevelRank

    def __post_init__(self) -> None:
        n, k = self.ctx.n, self.ctx.k
        if len(self.rows) != n - 1:
            raise ValueError(f"expected {n - 1} rows, got {self.rows}")
        if any(r < 0 for r in self.rows):
            raise ValueError(f"negative row in {self.rows}")
        if any(a < b for a, b in zip(self.rows, self.rows[1:])):
            raise ValueError(f"rows not weakly decreasing: {self.rows}")
        if self.rows and self.rows[0] > k:
            raise ValueError(f"{self.rows} does not fit level {k}")

    @property
    def boxes(self) -> int:
        return sum(self.rows)

    def short(self) -> List[int]:
        """Rows with trailing zeros dropped (the JSON form)."""
        out = list(self.rows)
        while out and out[-1] == 0:
            out.pop()
        return out

    def __repr__(self) -> str:
        return f"W{self.short()}"


def weight(ctx: LevelRank, rows: Sequence[int] = ()) -> AlcoveWeight:
    """Build a weight from a short row list; an N-row diagram loses its full columns."""
    rows = [int(r) for r in rows]
    while rows and rows[-1] == 0:
        rows.pop()
    if len(rows) > ctx.n:
        raise ValueError(f"{rows} has more than N={ctx.n} rows")
    if len(rows) == ctx.n:
        cut = rows[-1]
        rows = [r - cut for r in rows[:-1]]
    rows += [0] * (ctx.n - 1 - len(rows))
    return AlcoveWeight(tuple(rows), ctx)


def empty(ctx: LevelRank) -> AlcoveWeight:
    return AlcoveWeight((0,) * (ctx.n - 1), ctx)


# --------------------------------- Enumeration --------------------------------


def _partitions_in_box(height: int, width: int) -> Iterator[Tuple[int, ...]]:
    def rec(i: int, cap: int, acc: List[int]):
        if i == height:
            yield tuple(acc)
            return
        for r in range(cap, -1, -1):
            acc.append(r)
            yield from rec(i + 1, r, acc)
            acc.pop()

    yield from rec(0, width, [])


def _order_key(rows: Tuple[int, ...]):
    return (sum(rows), tuple(-r for r in rows))


class AlcoveIndex:
    """All weights of one LevelRank in canonical order plus reverse lookup."""

    def __init__(self, ctx: LevelRank, weights: Sequence[AlcoveWeight]):
        self.ctx = ctx
        self.weights: Tuple[AlcoveWeight, ...] = tuple(weights)
        self._pos: Dict[AlcoveWeight, int] = {w: i for i, w in enumerate(self.weights)}

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, i: int) -> AlcoveWeight:
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)

    def __contains__(self, w: object) -> bool:
        return w in self._pos

    def index_of(self, w: AlcoveWeight) -> int:
        try:
            return self._pos[w]
        except KeyError:
            raise ValueError(f"{w} is not in the alcove of {self.ctx}") from None

    @cached_property
    def tau_perm(self) -> np.ndarray:
        """p[i] = position of tau(weights[i])."""
        return np.array([self._pos[tau(w)] for w in self.weights], dtype=np.int64)

    @cached_property
    def dual_perm(self) -> np.ndarray:
        return np.array([self._pos[dual(w)] for w in self.weights], dtype=np.int64)

    @cached_property
    def boxes(self) -> np.ndarray:
        return np.array([w.boxes for w in self.weights], dtype=np.int64)

    def tau_power_perm(self, j: int) -> np.ndarray:
        j %= self.ctx.n
        p = np.arange(len(self), dtype=np.int64)
        step = self.tau_perm
        while j:
            if j & 1:
                p = step[p]
            step = step[step]
            j >>= 1
        return p

    def to_json(self) -> dict:
        return {"n": self.ctx.n, "k": self.ctx.k, "weights": [w.short() for w in self.weights]}


@lru_cache(maxsize=64)
def enumerate_alcove(ctx: LevelRank) -> AlcoveIndex:
    rows = sorted(_partitions_in_box(ctx.n - 1, ctx.k), key=_order_key)
    idx = AlcoveIndex(ctx, [AlcoveWeight(r, ctx) for r in rows])
    expected = comb(ctx.n - 1 + ctx.k, ctx.k)
    if len(idx) != expected:
        raise AssertionError(f"alcove size {len(idx)} != binomial {expected}")
    logger.debug("alcove N=%d k=%d: %d weights", ctx.n, ctx.k, len(idx))
    return idx


# ------------------------------ Dynkin / duality -------------------------------


def dynkin_to_diagram(labels: Sequence[int], ctx: LevelRank) -> AlcoveWeight:
    labels = [int(a) for a in labels]
    if len(labels) != ctx.n - 1:
        raise ValueError(f"need {ctx.n - 1} Dynkin labels, got {labels}")
    if any(a < 0 for a in labels):
        raise ValueError(f"negative Dynkin label in {labels}")
    if sum(labels) > ctx.k:
        raise ValueError(f"Dynkin labels {labels} exceed level {ctx.k}")
    rows = [sum(labels[i:]) for i in range(len(labels))]
    return AlcoveWeight(tuple(rows), ctx)


def diagram_to_dynkin(w: AlcoveWeight) -> Tuple[int, ...]:
    r = list(w.rows) + [0]
    return tuple(r[i] - r[i + 1] for i in range(len(w.rows)))


def dual(w: AlcoveWeight) -> AlcoveWeight:
    return dynkin_to_diagram(tuple(reversed(diagram_to_dynkin(w))), w.ctx)


# ------------------------------- Simple currents -------------------------------


def tau(w: AlcoveWeight) -> AlcoveWeight:
    """Prepend a k-box row, then delete the full columns of height N."""
    r, k = w.rows, w.ctx.k
    if not r:
        return w
    last = r[-1]
    return AlcoveWeight((k - last,) + tuple(x - last for x in r[:-1]), w.ctx)


def tau_power(w: AlcoveWeight, j: int) -> AlcoveWeight:
    for _ in range(j % w.ctx.n):
        w = tau(w)
    return w


def t_of(w: AlcoveWeight) -> Tuple[int, int]:
    b = w.boxes
    return b, b % w.ctx.n


def zn_orbit(w: AlcoveWeight) -> List[AlcoveWeight]:
    orbit = [w]
    cur = tau(w)
    while cur != w:
        orbit.append(cur)
        cur = tau(cur)
    return orbit


def zn_stab_order(w: AlcoveWeight) -> int:
    return w.ctx.n // len(zn_orbit(w))


def dn_stab_trivial(w: AlcoveWeight) -> bool:
    orbit = zn_orbit(w)
    return len(orbit) == w.ctx.n and dual(w) not in orbit


def subgroup_orbit(w: AlcoveWeight, step: int) -> List[AlcoveWeight]:
    """Orbit of w under <tau^step> (step divides N)."""
    orbit = [w]
    cur = tau_power(w, step)
    while cur != w:
        orbit.append(cur)
        cur = tau_power(cur, step)
    return orbit


# ------------------------------ Numerical data ---------------------------------


def _shifted(w: AlcoveWeight) -> List[int]:
    n = w.ctx.n
    lam = list(w.rows) + [0]
    return [lam[i] + n - 1 - i for i in range(n)]


def qdim(w: AlcoveWeight, ctx: LevelRank | None = None) -> float:
    ctx = ctx or w.ctx
    ell = np.array(_shifted(w), dtype=float)
    n = ctx.n
    i, j = np.triu_indices(n, k=1)
    x = np.pi / ctx.kappa
    num = np.sin((ell[i] - ell[j]) * x)
    den = np.sin((j - i) * x)
    return float(np.prod(num / den))


def qdims(index: AlcoveIndex) -> np.ndarray:
    return np.array([qdim(w) for w in index.weights])


def qdim_precise(w: AlcoveWeight, dps: int = 34):
    import mpmath

    with mpmath.workdps(dps):
        n, kap = w.ctx.n, w.ctx.kappa
        ell = _shifted(w)
        val = mpmath.mpf(1)
        for a in range(n):
            for b in range(a + 1, n):
                val *= mpmath.sinpi(mpmath.mpf(ell[a] - ell[b]) / kap) / mpmath.sinpi(mpmath.mpf(b - a) / kap)
        return +val


def conformal_weight(w: AlcoveWeight, ctx: LevelRank | None = None) -> Fraction:
    """h = <lam, lam + 2 rho> / (2(k+N)); partition form of the Casimir."""
    ctx = ctx or w.ctx
    n = ctx.n
    lam = list(w.rows) + [0]
    size = sum(lam)
    cas = Fraction(sum(x * x for x in lam) + sum(x * (n + 1 - 2 * (i + 1)) for i, x in enumerate(lam)))
    cas -= Fraction(size * size, n)
    return cas / (2 * ctx.kappa)


def central_charge(ctx: LevelRank) -> Fraction:
    return Fraction(ctx.k * (ctx.n * ctx.n - 1), ctx.kappa)


def global_dimension(ctx: LevelRank) -> float:
    d = qdims(enumerate_alcove(ctx))
    return float(np.sum(d * d))


def global_dimension_precise(ctx: LevelRank, dps: int = 34):
    import mpmath

    with mpmath.workdps(dps):
        return mpmath.fsum(qdim_precise(w, dps) ** 2 for w in enumerate_alcove(ctx))


# ------------------------------ Level-rank transpose ---------------------------


def transpose_weight(w: AlcoveWeight) -> AlcoveWeight:
    """T(lam) = tau^-(|lam| div N)(lam^T with height-N columns stripped); needs N = k.

    Stripping satisfies strip((tau lam)^T) = tau^(-lam_{N-1}) strip(lam^T), so T(tau lam) = tau^-1 T(lam)
    and T is a bijection of the alcove carrying Z_N orbits onto Z_N orbits.
    """
    ctx = w.ctx
    if ctx.n != ctx.k:
        raise ValueError("transpose_weight is defined for N = k only")
    cols = [sum(1 for r in w.rows if r > c) for c in range(w.rows[0] if w.rows else 0)]
    return tau_power(weight(ctx, cols), -(w.boxes // ctx.n))
