#!/usr/bin/env python
"""
Branching tables of conformal embeddings V(sl_N, k) in a level-1 theory.

A table maps each local simple label of the big theory to the multiset of alcove
weights of C(sl_N, k) its restriction contains. Families:
  plus2    C(sl_N, N+2) in C(sl_{N(N+1)/2}, 1)
  minus2   C(sl_N, N-2) in C(sl_{N(N-1)/2}, 1)
  adjoint  C(sl_N, N)   in C(so_{N^2-1}, 1)
plus the sporadic e6 / e7 / so20 / sp20 tables and the sl_6 level 6 algebras derived
from sp20 (level-rank transpose and the Ising-type extension).
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from fusionmod.alcove import (
    AlcoveWeight,
    LevelRank,
    conformal_weight,
    enumerate_alcove,
    global_dimension,
    qdim,
    subgroup_orbit,
    tau,
    tau_power,
    transpose_weight,
    weight,
)
from fusionmod.errors import CheckFailure

logger = logging.getLogger(__name__)

Row = Counter  # AlcoveWeight -> multiplicity


@dataclass
class BranchingTable:
    embedding: str
    ctx: LevelRank
    labels: List[str]
    rows: Dict[str, Row]
    pointed_target: bool = False
    notes: List[str] = field(default_factory=list)

    @property
    def vacuum(self) -> Row:
        return self.rows[self.labels[0]]

    def to_json(self) -> dict:
        index = enumerate_alcove(self.ctx)
        out = []
        for lbl in self.labels:
            ws = sorted(self.rows[lbl].items(), key=lambda kv: index.index_of(kv[0]))
            out.append({"label": lbl, "weights": [[w.short(), m] for w, m in ws]})
        return {"embedding": self.embedding, "n": self.ctx.n, "k": self.ctx.k, "rows": out}


def _row(weights) -> Row:
    return Counter(weights)


def _validate(table: BranchingTable) -> BranchingTable:
    index = enumerate_alcove(table.ctx)
    for lbl in table.labels:
        row = table.rows[lbl]
        if not row:
            raise CheckFailure(f"{table.embedding}: empty row {lbl}")
        for w, m in row.items():
            if w not in index or m < 1:
                raise CheckFailure(f"{table.embedding}: bad entry {w} x{m} in row {lbl}")
    empty_w = index[0]
    if table.vacuum.get(empty_w, 0) != 1:
        raise CheckFailure(f"{table.embedding}: vacuum row must contain the empty diagram once")
    return table


def _normalise(vec: Sequence[int], ctx: LevelRank) -> AlcoveWeight:
    """Shift a decreasing integer vector so its last entry is 0, read it as a diagram."""
    last = vec[-1]
    return weight(ctx, [v - last for v in vec])


# ---------------------------------- sl targets -----------------------------------


def branch_plus2(n: int) -> BranchingTable:
    """Pairs (s, l) with s in {+-1}^N, 0 <= l < N; label j = l(N+1) + sum_{s_i=1} (N+1-i)."""
    if n < 3:
        raise ValueError("plus2 branching needs N >= 3")
    ctx = LevelRank(n, n + 2)
    size = n * (n + 1) // 2
    rho = [n - i for i in range(n)]
    rows: Dict[int, set] = {j: set() for j in range(size)}
    for s in itertools.product((-1, 1), repeat=n):
        sigma = sorted((si * r for si, r in zip(s, rho)), reverse=True)
        base = _normalise([a - b for a, b in zip(sigma, rho)], ctx)
        js = sum(r for si, r in zip(s, rho) if si == 1)
        for ell in range(n):
            j = (ell * (n + 1) + js) % size
            rows[j].add(tau_power(base, ell))
    labels = [f"Λ{j}" for j in range(size)]
    table = BranchingTable(
        f"sl{n}_{n + 2}_plus2", ctx, labels, {f"Λ{j}": _row(rows[j]) for j in range(size)}, pointed_target=True,
    )
    return _validate(table)


def branch_minus2(n: int) -> BranchingTable:
    """Pairs (s, l) with prod s_i = 1 (s_N fixed by the others), shifts tau^(2l)."""
    if n < 4:
        raise ValueError("minus2 branching needs N >= 4")
    ctx = LevelRank(n, n - 2)
    size = n * (n - 1) // 2
    rho = [n - 1 - i for i in range(n)]
    rows: Dict[int, set] = {j: set() for j in range(size)}
    for head in itertools.product((-1, 1), repeat=n - 1):
        s = head + (int(np.prod(head)),)
        sigma = sorted((si * r for si, r in zip(s, rho)), reverse=True)
        base = _normalise([a - b for a, b in zip(sigma, rho)], ctx)
        js = sum(r for si, r in zip(s, rho) if si == 1)
        for ell in range(n):
            j = (2 * ell * (n - 1) + js) % size
            rows[j].add(tau_power(base, 2 * ell))
    labels = [f"Λ{j}" for j in range(size)]
    table = BranchingTable(
        f"sl{n}_{n - 2}_minus2", ctx, labels, {f"Λ{j}": _row(rows[j]) for j in range(size)}, pointed_target=True,
    )
    return _validate(table)


# ---------------------------------- adjoint -----------------------------------


def _partitions_with_hook_below(n: int):
    for length in range(n):
        for parts in itertools.combinations_with_replacement(range(1, n), length):
            lam = sorted(parts, reverse=True)
            if not lam or lam[0] + len(lam) <= n:
                yield lam


def _pair_vector(lam: List[int], n: int) -> List[int]:
    """(lam, lam^T) padded to length N, shifted by l(lam) so the result is a partition."""
    lt = [sum(1 for x in lam if x > c) for c in range(lam[0])] if lam else []
    vec = lam + [0] * (n - len(lam) - len(lt)) + [-x for x in reversed(lt)]
    shift = len(lam)
    return [v + shift for v in vec]


def staircase(ctx: LevelRank) -> AlcoveWeight:
    return weight(ctx, list(range(ctx.n - 1, 0, -1)))


def branch_adjoint(n: int) -> BranchingTable:
    if n < 4:
        raise ValueError("adjoint branching needs N >= 4")
    ctx = LevelRank(n, n)
    one: Row = Counter()
    vec: Row = Counter()
    for lam in _partitions_with_hook_below(n):
        w = weight(ctx, _pair_vector(lam, n))
        (one if sum(lam) % 2 == 0 else vec)[w] += 1
    stair = staircase(ctx)
    if n % 2 == 0:
        labels = ["1", "V", "S"]
        rows = {"1": one, "V": vec, "S": Counter({stair: 2 ** ((n - 2) // 2)})}
    else:
        spin = 2 ** ((n - 3) // 2)
        labels = ["1", "V", "S+", "S-"]
        rows = {"1": one, "V": vec, "S+": Counter({stair: spin}), "S-": Counter({stair: spin})}
    return _validate(BranchingTable(f"sl{n}_{n}_so{n * n - 1}", ctx, labels, rows))


def so_extension(n: int) -> BranchingTable:
    """For(1 + S+) of the adjoint embedding, an algebra when N = +-1 mod 8."""
    if n % 8 not in (1, 7):
        raise ValueError(f"so_extension needs N = +-1 mod 8, got N={n}")
    base = branch_adjoint(n)
    row = base.rows["1"] + base.rows["S+"]
    table = BranchingTable(f"sl{n}_{n}_so{n * n - 1}_ext", base.ctx, ["1"], {"1": row})
    table.notes.append("single local simple: the local category is Vec")
    return _validate(table)


# ---------------------------------- sporadic -----------------------------------


def _orbit(ctx: LevelRank, rows: Sequence[int], step: int) -> List[AlcoveWeight]:
    return subgroup_orbit(weight(ctx, rows), step)


def _spec_row(ctx: LevelRank, step: int, orbits: Sequence[Sequence[int]], singles: Sequence[Sequence[int]] = ()) -> Row:
    row: Row = Counter()
    for o in orbits:
        row.update(_orbit(ctx, o, step))
    for s in singles:
        row[weight(ctx, s)] += 1
    return row


def _e6() -> BranchingTable:
    ctx = LevelRank(3, 9)
    g = _spec_row(ctx, 1, [[4, 2]])
    rows = {"1": _spec_row(ctx, 1, [[], [5, 1]]), "g": g, "g2": Counter(g)}
    return BranchingTable("sl3_9_e6", ctx, ["1", "g", "g2"], rows, pointed_target=True)


def _e7() -> BranchingTable:
    ctx = LevelRank(3, 21)
    rows = {
        "1": _spec_row(ctx, 1, [[], [8, 4]]),
        "g": _spec_row(ctx, 1, [[5], [5, 5], [11, 7], [11, 4]]),
    }
    return BranchingTable("sl3_21_e7", ctx, ["1", "g"], rows, pointed_target=True)


def _so20() -> BranchingTable:
    ctx = LevelRank(4, 8)
    spin = _spec_row(ctx, 1, [[5, 2, 1]])
    rows = {
        "1": _spec_row(ctx, 1, [[], [4, 3, 1]]),
        "V": _spec_row(ctx, 1, [[2, 2], [5, 3]]),
        "S+": spin,
        "S-": Counter(spin),
    }
    return BranchingTable("sl4_8_so20", ctx, ["1", "V", "S+", "S-"], rows)


SP20_ROWS: Dict[int, Tuple[List[List[int]], List[List[int]]]] = {
    0: ([[], [2, 2, 2]], [[4, 4, 2, 2]]),
    1: ([[1, 1, 1], [3, 3, 2, 1]], []),
    2: ([[2, 2, 1, 1], [6, 5, 3, 3, 1]], []),
    3: ([[3, 2, 2, 2], [3, 3, 1, 1, 1]], [[5, 4, 3, 2, 1]]),
    4: ([[6, 6, 3, 3], [4, 3, 2, 2, 1]], [[6, 4, 4, 2, 2]]),
    5: ([[5, 3, 3, 2, 2], [5, 5, 3, 2]], []),
}


def _tau_row(row: Row) -> Row:
    return Counter({tau(w): m for w, m in row.items()})


def _sp20() -> BranchingTable:
    ctx = LevelRank(6, 6)
    rows: Dict[str, Row] = {}
    for i, (orbits, singles) in SP20_ROWS.items():
        rows[f"Λ{i}"] = _spec_row(ctx, 2, orbits, singles)
    for i in range(1, 5):
        rows[f"Λ{10 - i}"] = _tau_row(rows[f"Λ{i}"])
    rows["Λ10"] = _tau_row(rows["Λ0"])
    labels = [f"Λ{i}" for i in range(11)]
    return BranchingTable("sl6_6_sp20", ctx, labels, rows)


# twist-preserving autoequivalence of C(sp_20, 1) on the index i of Λ_i
SP20_TWIST = (0, 9, 2, 7, 4, 5, 6, 3, 8, 1, 10)


def transpose_branching(base: BranchingTable) -> BranchingTable:
    """Level-rank transpose of the sp20 table; X_j = T(Λ_i), j = i (i even) or 10 - i (i odd)."""
    if base.embedding != "sl6_6_sp20":
        raise ValueError("transpose_branching applies to the sl6_6_sp20 table")
    rows: Dict[str, Row] = {}
    for i in range(11):
        j = i if i % 2 == 0 else 10 - i
        rows[f"X{j}"] = Counter({transpose_weight(w): m for w, m in base.rows[f"Λ{i}"].items()})
    labels = [f"X{j}" for j in range(11)]
    table = BranchingTable("sl6_6_sp20_tr", base.ctx, labels, rows)
    _check_printed_transpose(table)
    return _validate(table)


TR_PRINTED = {
    "X0": ([[], [6, 3, 3]], [[4, 4, 2, 2]]),
    "X1": ([[6, 3], [4, 3, 2]], []),
    "X2": ([[6, 4, 2], [5, 3, 2, 2]], []),
    "X9": ([[3], [6, 4, 3, 2]], []),
}


def _check_printed_transpose(table: BranchingTable) -> None:
    for lbl, (orbits, singles) in TR_PRINTED.items():
        want = _spec_row(table.ctx, 2, orbits, singles)
        if table.rows[lbl] != want:
            raise CheckFailure(
                f"transposed row {lbl} does not match the listed decomposition",
                {"label": lbl, "got": sorted(w.short() for w in table.rows[lbl].elements())},
            )


EXT_GROUPS = (("1", (0, 6)), ("sigma", (3, 7)), ("psi", (4, 10)))


def extension_branching(base: BranchingTable) -> BranchingTable:
    """A^ext = For(1 + V^Λ6); locals group the sp20 rows as 0+6, 3+7, 4+10."""
    if base.embedding != "sl6_6_sp20":
        raise ValueError("extension_branching applies to the sl6_6_sp20 table")
    rows = {lbl: base.rows[f"Λ{a}"] + base.rows[f"Λ{b}"] for lbl, (a, b) in EXT_GROUPS}
    table = BranchingTable("sl6_6_sp20_ext", base.ctx, [g[0] for g in EXT_GROUPS], rows)
    local_twists(table)
    return _validate(table)


SPORADIC: Dict[str, Callable[[], BranchingTable]] = {
    "sl3_9_e6": _e6,
    "sl3_21_e7": _e7,
    "sl4_8_so20": _so20,
    "sl6_6_sp20": _sp20,
}


def sporadic_table(table_id: str) -> BranchingTable:
    try:
        build = SPORADIC[table_id]
    except KeyError:
        raise KeyError(f"unknown sporadic table {table_id!r}; known: {sorted(SPORADIC)}") from None
    return _validate(build())


def get_table(table_id: str, n: Optional[int] = None) -> BranchingTable:
    """CLI-facing lookup across families, sporadic and derived tables."""
    families = {"plus2": branch_plus2, "minus2": branch_minus2, "adjoint": branch_adjoint, "so_ext": so_extension}
    if table_id in families:
        if n is None:
            raise ValueError(f"table {table_id!r} needs --n")
        return families[table_id](n)
    if table_id == "sp20_tr":
        return transpose_branching(sporadic_table("sl6_6_sp20"))
    if table_id == "sp20_ext":
        return extension_branching(sporadic_table("sl6_6_sp20"))
    return sporadic_table(table_id)


TABLE_IDS = ("plus2", "minus2", "adjoint", "so_ext", *SPORADIC, "sp20_tr", "sp20_ext")


# ------------------------------------ Checks -------------------------------------


def _frac(h: Fraction) -> Fraction:
    return h - (h.numerator // h.denominator)


def local_twists(table: BranchingTable) -> Dict[str, Fraction]:
    out = {}
    for lbl in table.labels:
        hs = {_frac(conformal_weight(w)) for w in table.rows[lbl]}
        if len(hs) != 1:
            raise CheckFailure(
                f"{table.embedding}: row {lbl} mixes twists",
                {"label": lbl, "twists": sorted(str(h) for h in hs)},
            )
        out[lbl] = hs.pop()
    return out


def grading_check(table: BranchingTable) -> bool:
    """Each row lies in one coset of the Z_N-grading subgroup generated by the vacuum row."""
    n = table.ctx.n
    g = n
    for w in table.vacuum:
        g = gcd(g, w.boxes % n)
    for lbl in table.labels:
        residues = {w.boxes % g for w in table.rows[lbl]} if g > 1 else {0}
        if len(residues) != 1:
            logger.debug("%s: row %s spans residues %s mod %d", table.embedding, lbl, residues, g)
            return False
    return True


def branching_matrix(table: BranchingTable) -> sp.csr_matrix:
    """Alcove x local-label matrix of multiplicities."""
    index = enumerate_alcove(table.ctx)
    rows, cols, vals = [], [], []
    for c, lbl in enumerate(table.labels):
        for w, m in table.rows[lbl].items():
            rows.append(index.index_of(w))
            cols.append(c)
            vals.append(m)
    return sp.csr_matrix(
        (np.array(vals, dtype=np.int64), (np.array(rows), np.array(cols))),
        shape=(len(index), len(table.labels)),
    )


def consistency_check(table: BranchingTable, rel_tol: float = 1e-6, pointed_tol: float = 1e-8) -> dict:
    def row_dim(row: Row) -> float:
        return sum(m * qdim(w) for w, m in row.items())

    dim_a = row_dim(table.vacuum)
    qloc = {lbl: row_dim(table.rows[lbl]) / dim_a for lbl in table.labels}
    d_local = sum(v * v for v in qloc.values())
    total = global_dimension(table.ctx)
    ok = abs(d_local * dim_a ** 2 - total) <= rel_tol * total
    pointed_ok = None
    if table.pointed_target:
        pointed_ok = all(abs(v - 1.0) <= pointed_tol for v in qloc.values())
        ok = ok and pointed_ok
    return {
        "embedding": table.embedding,
        "dim_algebra": dim_a,
        "local_qdims": qloc,
        "local_dimension": d_local,
        "global_dimension": total,
        "pointed_locals": pointed_ok,
        "grading": grading_check(table),
        "ok": ok,
    }
