#!/usr/bin/env python
"""
The sixteen module categories over C(sl_6, 6) and their relative tensor products.

Eight invariants are the generic Z(d,+-). The other eight come from algebras:
  so35, ext        n n^T               (one each)
  sp20, tr         n n^T and n F n^T   (F swaps 1<->9 and 3<->7)
  het, het^T       n_so35 F n_ext^T    (F matches the Ising labels by twist)
Which construction is M9..M16 is solved by matching the listed product table.
"""

from __future__ import annotations

import itertools
import logging
import re
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from fusionmod.alcove import LevelRank
from fusionmod.branching import (
    SP20_TWIST,
    BranchingTable,
    branch_adjoint,
    branching_matrix,
    extension_branching,
    local_twists,
    sporadic_table,
    transpose_branching,
)
from fusionmod.classify import TensorTable
from fusionmod.errors import CheckFailure
from fusionmod.invariants import (
    Basis,
    IntMatrix,
    generic_family,
    heterotic,
    matmul,
    rational_rank,
    twisted,
    type_one,
)
from fusionmod.modular import Modular, is_physical

logger = logging.getLogger(__name__)

CTX = LevelRank(6, 6)

GENERIC = ["M1+", "M2+", "M3+", "M6+", "M1-", "M2-", "M3-", "M6-"]
LABELS = GENERIC + [f"M{i}" for i in range(9, 17)]

# Z(row) Z(col), rows and columns in LABELS order.
PRINTED_TABLE = """\
M1+ | M2+ | M3+ | M6+ | M1- | M2- | M3- | M6- | M9 | M10 | M11 | M12 | M13 | M14 | M15 | M16
M2+ | M1+ | M6+ | M3+ | M2- | M1- | M6- | M3- | M9 | M15 | M11 | M16 | M13 | M14 | M10 | M12
M3+ | M6+ | 3 M3+ | 3M6+ | M3- | M6- | 3M3- | 3M6- | 3 M9 | 3 M10 | 3 M11 | 3 M12 | 3 M13 | 3 M14 | 3M15 | 3 M16
M6+ | M3+ | 3M6+ | 3 M3+ | M6- | M3- | 3M6- | 3M3- | 3 M9 | 3M15 | 3 M11 | 3 M16 | 3 M13 | 3 M14 | 3 M10 | 3 M12
M1- | M2- | M3- | M6- | M1+ | M2+ | M3+ | M6+ | M9 | M10 | M11 | M16 | M13 | M14 | M15 | M12
M2- | M1- | M6- | M3- | M2+ | M1+ | M6+ | M3+ | M9 | M15 | M11 | M12 | M13 | M14 | M10 | M16
M3- | M6- | 3M3- | 3M6- | M3+ | M6+ | 3 M3+ | 3M6+ | 3 M9 | 3 M10 | 3 M11 | 3 M16 | 3 M13 | 3 M14 | 3M15 | 3 M12
M6- | M3- | 3M6- | 3M3- | M6+ | M3+ | 3M6+ | 3 M3+ | 3 M9 | 3M15 | 3 M11 | 3 M12 | 3 M13 | 3 M14 | 3 M10 | 3 M16
M9 | M9 | 3 M9 | 3 M9 | M9 | M9 | 3 M9 | 3 M9 | 16 M9 | 4 M14 | 8 M14 | 4 M14 | 8 M9 | 16 M14 | 4 M14 | 4 M14
M10 | M15 | 3 M10 | 3M15 | M10 | M15 | 3 M10 | 3M15 | 4 M13 | 6 M10+ M11 | 8 M11 | 4 M11 | 8 M13 | 4 M11 | M11 + 6M15 | 4 M11
M11 | M11 | 3 M11 | 3 M11 | M11 | M11 | 3 M11 | 3 M11 | 8 M13 | 8 M11 | 16 M11 | 8 M11 | 16 M13 | 8 M11 | 8 M11 | 8 M11
M12 | M16 | 3 M12 | 3 M16 | M16 | M12 | 3 M16 | 3 M12 | 4 M13 | 4 M11 | 8 M11 | M11 + 6M12 | 8 M13 | 4 M11 | 4 M11 | M11+ 6M16
M13 | M13 | 3 M13 | 3 M13 | M13 | M13 | 3 M13 | 3 M13 | 16 M13 | 4 M11 | 8 M11 | 4 M11 | 8 M13 | 16 M11 | 4 M11 | 4 M11
M14 | M14 | 3 M14 | 3 M14 | M14 | M14 | 3 M14 | 3 M14 | 8 M9 | 8 M14 | 16 M14 | 8 M14 | 16 M9 | 8 M14 | 8 M14 | 8 M14
M15 | M10 | 3M15 | 3 M10 | M15 | M10 | 3M15 | 3 M10 | 4 M13 | M11 + 6M15 | 8 M11 | 4 M11 | 8 M13 | 4 M11 | 6M10 + M11 | 4 M11
M16 | M12 | 3 M16 | 3 M12 | M12 | M16 | 3 M12 | 3 M16 | 4 M13 | 4 M11 | 8 M11 | M11+ 6M16 | 8 M13 | 4 M11 | 4 M11 | M11+ 6M12
"""

# signed labels only exist for d in {1,2,3,6}; unsigned ones are M9..M16
_TERM = re.compile(r"(\d+)?\s*(M(?:[1236][+-]|9|1[0-6]))")


def parse_cell(text: str) -> Dict[str, int]:
    out: Dict[str, int] = {}
    for coeff, label in _TERM.findall(text):
        out[label] = out.get(label, 0) + (int(coeff) if coeff else 1)
    return out


def printed_table() -> TensorTable:
    lines = [ln for ln in PRINTED_TABLE.splitlines() if ln.strip()]
    if len(lines) != len(LABELS):
        raise ValueError(f"expected {len(LABELS)} rows, found {len(lines)}")
    cells = {}
    for row, line in zip(LABELS, lines):
        texts = [c.strip() for c in line.split("|")]
        if len(texts) != len(LABELS):
            raise ValueError(f"row {row} has {len(texts)} cells")
        for col, txt in zip(LABELS, texts):
            cells[(row, col)] = parse_cell(txt)
    return TensorTable(list(LABELS), cells)


# ---- Constructions ----

def ising_identification(a: BranchingTable, b: BranchingTable) -> List[int]:
    """perm[i] = index in b of the label with the same twist as a.labels[i]."""
    ta, tb = local_twists(a), local_twists(b)
    perm = []
    for lbl in a.labels:
        matches = [j for j, other in enumerate(b.labels) if tb[other] == ta[lbl]]
        if len(matches) != 1:
            raise CheckFailure(f"twist of {lbl} matches {len(matches)} labels of {b.embedding}")
        perm.append(matches[0])
    return perm


@lru_cache(maxsize=1)
def algebra_tables() -> Dict[str, BranchingTable]:
    sp20 = sporadic_table("sl6_6_sp20")
    return {
        "so35": branch_adjoint(6),
        "sp20": sp20,
        "tr": transpose_branching(sp20),
        "ext": extension_branching(sp20),
    }


@lru_cache(maxsize=1)
def candidates() -> Dict[str, IntMatrix]:
    """The sixteen candidate invariants by construction name."""
    tabs = algebra_tables()
    n = {name: branching_matrix(t) for name, t in tabs.items()}
    out: Dict[str, IntMatrix] = {}
    for (d, s), z in generic_family(6, 6).items():
        out[f"M{d}{'+' if s > 0 else '-'}"] = z
    out["so35"] = type_one(CTX, n["so35"])
    out["ext"] = type_one(CTX, n["ext"])
    out["sp20"] = type_one(CTX, n["sp20"])
    out["sp20_F"] = twisted(CTX, n["sp20"], SP20_TWIST)
    out["tr"] = type_one(CTX, n["tr"])
    out["tr_F"] = twisted(CTX, n["tr"], SP20_TWIST)
    f = ising_identification(tabs["so35"], tabs["ext"])
    out["het"] = heterotic(CTX, n["so35"], f, n["ext"])
    out["het_T"] = out["het"].transpose()
    return out


@lru_cache(maxsize=1)
def candidate_products() -> Dict[Tuple[str, str], Dict[str, int]]:
    cands = candidates()
    names = list(cands)
    basis = Basis([cands[x] for x in names])
    out = {}
    for a in names:
        for b in names:
            coeffs = basis.coefficients(matmul(cands[a], cands[b]))
            if coeffs is None:
                raise CheckFailure(f"{a} x {b} is not a nonnegative combination of the sixteen")
            out[(a, b)] = {x: c for x, c in zip(names, coeffs) if c}
    return out


def role_assignments():
    for x9, x11 in itertools.permutations(("so35", "ext")):
        for x10, x12 in itertools.permutations(("sp20", "tr")):
            for x13, x14 in itertools.permutations(("het", "het_T")):
                assign = {g: g for g in GENERIC}
                assign.update({
                    "M9": x9, "M11": x11,
                    "M10": x10, "M15": f"{x10}_F",
                    "M12": x12, "M16": f"{x12}_F",
                    "M13": x13, "M14": x14,
                })
                yield assign


def table_under(assign: Dict[str, str]) -> TensorTable:
    back = {v: k for k, v in assign.items()}
    prods = candidate_products()
    cells = {}
    for r in LABELS:
        for c in LABELS:
            cells[(r, c)] = {back[x]: v for x, v in prods[(assign[r], assign[c])].items()}
    return TensorTable(list(LABELS), cells)


def compare_tables(got: TensorTable, want: TensorTable) -> List[dict]:
    return [
        {"row": r, "col": c, "got": got.cells[(r, c)], "want": want.cells[(r, c)]}
        for r in want.labels
        for c in want.labels
        if got.cells[(r, c)] != want.cells[(r, c)]
    ]


@lru_cache(maxsize=1)
def solve_assignment() -> Tuple[Tuple[str, str], ...]:
    want = printed_table()
    hits = []
    for assign in role_assignments():
        mism = compare_tables(table_under(assign), want)
        logger.debug("assignment %s: %d mismatching cells", {k: assign[k] for k in LABELS[8:]}, len(mism))
        if not mism:
            hits.append(assign)
    if len(hits) != 1:
        raise CheckFailure(f"{len(hits)} role assignments reproduce the product table", {"matches": hits})
    return tuple(sorted(hits[0].items()))


def sl66_invariants() -> Dict[str, IntMatrix]:
    assign = dict(solve_assignment())
    cands = candidates()
    return {lbl: cands[assign[lbl]] for lbl in LABELS}


def sl66_table() -> TensorTable:
    return table_under(dict(solve_assignment()))


def certify(data: Optional[Modular] = None, tol: float = 1e-6) -> dict:
    mats = sl66_invariants()
    reports = {lbl: is_physical(z, data, tol) for lbl, z in mats.items()}
    rank, deps = rational_rank(list(mats.values()))
    table = sl66_table()
    mism = compare_tables(table, printed_table())
    return {
        "assignment": {k: v for k, v in solve_assignment() if k not in GENERIC},
        "physical": {lbl: r["physical"] for lbl, r in reports.items()},
        "reports": reports,
        "rank": rank,
        "dependencies": deps,
        "table_mismatches": mism,
        "ok": all(r["physical"] for r in reports.values()) and rank == 16 and not mism,
    }
