"""
Pointed etale algebras A_m = sum of tau^(jN/m)(0), their simple / local module labels,
and the character action of Aut(A_m).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List

from fusionmod.alcove import (
    AlcoveWeight,
    LevelRank,
    conformal_weight,
    empty,
    enumerate_alcove,
    global_dimension,
    qdim,
    subgroup_orbit,
    tau_power,
)
from fusionmod.arith import eligible_m, is_eligible_m
from fusionmod.errors import CheckFailure

logger = logging.getLogger(__name__)

CONVENTIONS = ("untwisted", "twisted")
DEFAULT_CONVENTION = "untwisted"


@dataclass(frozen=True)
class ModuleLabel:
    orbit_rep: AlcoveWeight
    chi: int
    stab: int

    def to_json(self) -> dict:
        return {"orbit_rep": self.orbit_rep.short(), "chi": self.chi}


@dataclass(frozen=True)
class PointedAlgebra:
    ctx: LevelRank
    m: int

    def __post_init__(self) -> None:
        if not is_eligible_m(self.ctx.n, self.ctx.k, self.m):
            raise ValueError(f"m={self.m} is not eligible for N={self.ctx.n}, k={self.ctx.k}")

    @property
    def step(self) -> int:
        return self.ctx.n // self.m

    @property
    def generator(self) -> AlcoveWeight:
        return tau_power(empty(self.ctx), self.step)

    @property
    def support(self) -> List[AlcoveWeight]:
        return [tau_power(empty(self.ctx), j * self.step) for j in range(self.m)]

    @cached_property
    def orbits(self) -> List[List[AlcoveWeight]]:
        """Z_m-orbits in alcove order of their first member, each sorted with the canonical rep first."""
        seen = set()
        out = []
        for w in enumerate_alcove(self.ctx):
            if w in seen:
                continue
            orb = subgroup_orbit(w, self.step)
            seen.update(orb)
            out.append(sorted(orb, key=lambda x: x.rows))
        return out

    @cached_property
    def _rep_of(self) -> Dict[AlcoveWeight, AlcoveWeight]:
        return {w: orb[0] for orb in self.orbits for w in orb}

    def representative(self, w: AlcoveWeight) -> AlcoveWeight:
        return self._rep_of[w]

    def stab_order(self, w: AlcoveWeight) -> int:
        return self.m // len(subgroup_orbit(w, self.step))


def pointed_etale_list(n: int, k: int) -> List[PointedAlgebra]:
    ctx = LevelRank(n, k)
    return [PointedAlgebra(ctx, m) for m in eligible_m(n, k)]


# ---- Simple modules ----

def simple_modules(alg: PointedAlgebra) -> List[ModuleLabel]:
    out = []
    for orb in alg.orbits:
        s = alg.m // len(orb)
        out.extend(ModuleLabel(orb[0], chi, s) for chi in range(s))
    return out


def free_module(alg: PointedAlgebra, x: AlcoveWeight) -> List[ModuleLabel]:
    """Summands of A (x) X: one per character of Stab(X)."""
    rep = alg.representative(x)
    s = alg.stab_order(rep)
    return [ModuleLabel(rep, chi, s) for chi in range(s)]


# ---- Locality ----

def monodromy_exponent(alg: PointedAlgebra, x: AlcoveWeight) -> Fraction:
    """h(aX) - h(a) - h(X) mod 1 for the generator a of A_m."""
    ax = tau_power(x, alg.step)
    e = conformal_weight(ax) - conformal_weight(alg.generator) - conformal_weight(x)
    return e - (e.numerator // e.denominator)


def is_local(alg: PointedAlgebra, lbl: ModuleLabel, convention: str = DEFAULT_CONVENTION) -> bool:
    e = monodromy_exponent(alg, lbl.orbit_rep)
    if convention == "untwisted":
        return e == 0
    if convention == "twisted":
        target = Fraction(lbl.chi, lbl.stab)
        return e == target - (target.numerator // target.denominator)
    raise ValueError(f"unknown locality convention {convention!r}")


def local_modules(alg: PointedAlgebra, convention: str = DEFAULT_CONVENTION) -> List[ModuleLabel]:
    return [lbl for lbl in simple_modules(alg) if is_local(alg, lbl, convention)]


def local_global_dimension(alg: PointedAlgebra, convention: str = DEFAULT_CONVENTION) -> float:
    return sum((qdim(lbl.orbit_rep) / lbl.stab) ** 2 for lbl in local_modules(alg, convention))


def convention_report(alg: PointedAlgebra, convention: str, rel_tol: float = 1e-6) -> dict:
    locs = local_modules(alg, convention)
    vac = ModuleLabel(empty(alg.ctx), 0, alg.stab_order(empty(alg.ctx)))
    got = local_global_dimension(alg, convention)
    want = global_dimension(alg.ctx) / alg.m ** 2
    return {
        "convention": convention,
        "vacuum_local": vac in locs,
        "local_dimension": got,
        "expected_dimension": want,
        "dimension_ok": abs(got - want) <= rel_tol * want,
    }


def select_locality_convention(n: int, k: int, m: int, rel_tol: float = 1e-6) -> str:
    alg = PointedAlgebra(LevelRank(n, k), m)
    reports = [convention_report(alg, c, rel_tol) for c in CONVENTIONS]
    for r in reports:
        logger.debug("locality N=%d k=%d m=%d %s", n, k, m, r)
    ok = [r["convention"] for r in reports if r["vacuum_local"] and r["dimension_ok"]]
    if not ok:
        raise CheckFailure(f"no locality convention passes at N={n}, k={k}, m={m}", {"reports": reports})
    return ok[0]


# ---- Aut(A_m) action ----

def aut_character_action(ell: int, lbl: ModuleLabel) -> ModuleLabel:
    return ModuleLabel(lbl.orbit_rep, (lbl.chi + ell) % lbl.stab, lbl.stab)


def action_kernel(alg: PointedAlgebra, convention: str = DEFAULT_CONVENTION) -> List[int]:
    labels = local_modules(alg, convention)
    return [ell for ell in range(alg.m) if all(aut_character_action(ell, x) == x for x in labels)]
