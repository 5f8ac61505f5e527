#!/usr/bin/env python
"""
Verification suites behind `fusionmod verify`.

Every suite expands to a list of independent cases (a module-level function plus
its arguments). Cases run in a process pool and their reports are merged in the
order the cases were listed, so the output does not depend on scheduling.

  arith       divisor counting identity, d <-> (m, sign class) round trip
  invariants  delta-sum vs closed formula, physicality, generic tensor rule
  branching   q-dimension consistency and grading of the conformal-embedding tables
  cosets      brute-force double cosets vs the closed counts, exceptional groups
  classify    generic / exceptional counts, linear dependencies, brute-force scans,
              local-module dimensions, the sl(6) level 6 table
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from fusionmod.alcove import LevelRank
from fusionmod.arith import (
    count_identity_check,
    d_from_m_and_sign,
    divisor_domain,
    eligible_m,
    m_of_d,
    sign_classes,
    sign_vector_of_d,
)
from fusionmod.branching import consistency_check, get_table
from fusionmod.classify import (
    SPECIAL_COUNTS,
    UNVERIFIED_TENSOR,
    fixed_point_failures,
    free_weight_exceptions,
    generic_count,
    linear_dependencies,
    special_count,
)
from fusionmod.config import Settings
from fusionmod.cosets import (
    EXCEPTIONAL_GROUPS,
    EXCEPTIONAL_TRIPLES,
    SPECIAL_PAIRS,
    brute_force_coset_count,
    cyclic_model,
    dihedral_model,
    double_cosets,
    exceptional_coset_count,
    image_generator_invariance,
    pointed_coset_count,
)
from fusionmod.errors import FusionModError
from fusionmod.invariants import equals, generic_family, verify_tensor_rule, z_plus, z_plus_closed
from fusionmod.modular import StreamedS, is_physical, modular_data
from fusionmod.pointed import PointedAlgebra, convention_report, select_locality_convention

logger = logging.getLogger(__name__)

SUITES = ("arith", "invariants", "branching", "cosets", "classify")

# (n_min, n_max, k_min, k_max) defaults per suite
DEFAULT_RANGES: Dict[str, Tuple[int, int, int, int]] = {
    "arith": (2, 60, 1, 60),
    "invariants": (3, 8, 3, 10),
    "branching": (3, 7, 0, 0),
    "cosets": (2, 8, 1, 12),
    "classify": (2, 8, 1, 12),
}

EXPECTED_FREE_ZN = [(2, 2, 1)]
EXPECTED_FREE_DN = sorted([(3, 3, 0), (3, 6, 0), (4, 4, 0), (4, 4, 2), (5, 5, 0), (6, 3, 0), (6, 3, 3)])
EXPECTED_FIXED_POINT = [(2, 3), (2, 6), (3, 4), (4, 5), (5, 3)]

# every linear relation among the generic invariants; levels not listed have none
EXPECTED_DEPENDENCIES: Dict[Tuple[int, int], List[Dict[str, int]]] = {
    (3, 3): [{"M3+": 1, "M3-": -1}],
    (3, 6): [{"M3+": 1, "M3-": -1}],
    (5, 5): [{"M5+": 1, "M5-": -1}],
    (6, 3): [{"M3+": 1, "M3-": -1}],
    (4, 4): [{"M2+": 1, "M4+": 1, "M2-": -1, "M4-": -1}],
    (6, 6): [],
}
INDEPENDENT_SAMPLES = ((3, 4), (4, 3), (4, 5), (5, 4), (5, 6), (6, 5), (7, 4), (7, 6))

EXCEPTIONAL_COSETS = {(3, 9, 3): 4, (4, 8, 4): 3, (5, 5, 5): 4}


@dataclass(frozen=True)
class Case:
    name: str
    fn: Callable[..., dict]
    args: Tuple[Any, ...] = ()


def _run_case(case: Case) -> dict:
    try:
        report = case.fn(*case.args)
    except FusionModError as e:
        report = {"ok": False, "error": str(e), "report": getattr(e, "report", {})}
    except (ValueError, KeyError, ArithmeticError) as e:
        report = {"ok": False, "error": f"{type(e).__name__}: {e}"}
    report["case"] = case.name
    return report


# ---------------------------------- arith ----------------------------------


def arith_case(n: int, k_max: int) -> dict:
    identity, roundtrip, classes = [], [], []
    for k in range(1, k_max + 1):
        if not count_identity_check(n, k):
            identity.append(k)
        domain = divisor_domain(n, k)
        for m in eligible_m(n, k):
            with_m = [d for d in domain if m_of_d(n, k, d) == m]
            if len(with_m) != len(sign_classes(n, k, m)):
                classes.append([k, m])
        for d in domain:
            m = m_of_d(n, k, d)
            if d_from_m_and_sign(n, k, m, sign_vector_of_d(n, k, d)) != d:
                roundtrip.append([k, d])
    return {
        "identity_failures": identity,
        "class_count_failures": classes,
        "roundtrip_failures": roundtrip,
        "ok": not (identity or classes or roundtrip),
    }


# -------------------------------- invariants --------------------------------


def invariants_case(n: int, k: int, settings: Settings) -> dict:
    ctx = LevelRank(n, k)
    closed = [d for d in divisor_domain(n, k) if not equals(z_plus(n, k, d), z_plus_closed(n, k, d))]
    cache = settings.cache_dir if settings.cache_enabled else None
    data = modular_data(ctx, cache, settings.smatrix_tol, settings.max_alcove)
    unphysical, asymmetric = [], []
    for (d, s), z in generic_family(n, k).items():
        if not z.is_symmetric():
            asymmetric.append([d, s])
        rep = is_physical(z, data, settings.commute_tol)
        if not rep["physical"]:
            unphysical.append({"d": d, "sign": s, "report": rep})
    tensor = verify_tensor_rule(n, k)
    unverified = (n, k) in UNVERIFIED_TENSOR
    return {
        "closed_form_failures": closed,
        "asymmetric": asymmetric,
        "unphysical": unphysical,
        "commutation": "streamed" if isinstance(data, StreamedS) else "dense",
        "tensor_status": "unverified" if unverified else ("ok" if tensor["ok"] else "failed"),
        "tensor_failures": tensor["failures"],
        "ok": not (closed or asymmetric or unphysical) and (tensor["ok"] or unverified),
    }


# -------------------------------- branching ---------------------------------


def branching_targets(n_max: int) -> List[Tuple[str, Optional[int]]]:
    out: List[Tuple[str, Optional[int]]] = []
    out += [("plus2", n) for n in range(3, n_max + 1)]
    out += [("minus2", n) for n in range(5, n_max + 1)]
    out += [("adjoint", n) for n in range(4, n_max + 1)]
    out += [("so_ext", n) for n in range(7, n_max + 1) if n % 8 in (1, 7)]
    out += [(t, None) for t in ("sl3_9_e6", "sl3_21_e7", "sl4_8_so20", "sl6_6_sp20", "sp20_tr", "sp20_ext")]
    return out


def branching_case(table_id: str, n: Optional[int], rel_tol: float) -> dict:
    report = consistency_check(get_table(table_id, n), rel_tol=rel_tol)
    report["ok"] = report["ok"] and report["grading"]
    return report


# ---------------------------------- cosets ----------------------------------


def coset_model_case(mp: int, j: int) -> dict:
    dih = double_cosets(dihedral_model(mp, j))
    cyc = double_cosets(cyclic_model(mp, j))
    g = dihedral_model(mp, j)
    invariant = image_generator_invariance(g, g.subgroup[1] if len(g.subgroup) > 1 else g.elements[0])
    return {
        "dihedral": dih,
        "cyclic": cyc,
        "generator_invariant": invariant,
        "ok": dih == 2 ** (1 + j) and cyc == 2 ** j and invariant,
    }


def coset_pointed_case(n: int, k_max: int) -> dict:
    bad = []
    for k in range(1, k_max + 1):
        for m in eligible_m(n, k):
            if (n, k, m) in EXCEPTIONAL_TRIPLES:
                continue
            got, want = brute_force_coset_count(n, k, m), pointed_coset_count(n, k, m)
            if got != want:
                bad.append({"k": k, "m": m, "brute_force": got, "formula": want})
    return {"failures": bad, "ok": not bad}


def coset_exceptional_case() -> dict:
    got = {f"{n},{k},{m}": exceptional_coset_count(n, k, m) for (n, k, m) in EXCEPTIONAL_GROUPS}
    want = {f"{n},{k},{m}": c for (n, k, m), c in EXCEPTIONAL_COSETS.items()}
    return {"counts": got, "expected": want, "ok": got == want}


# --------------------------------- classify ---------------------------------


def generic_count_case(n: int, k_max: int) -> dict:
    counts, errors = {}, []
    for k in range(1, k_max + 1):
        if (n, k) in SPECIAL_PAIRS or (n, k) in ((2, 16), (16, 2)):
            continue
        try:
            counts[str(k)] = generic_count(n, k)
        except FusionModError as e:
            errors.append({"k": k, "error": str(e), "report": getattr(e, "report", {})})
    return {"counts": counts, "failures": errors, "ok": not errors}


def special_counts_case() -> dict:
    got = {f"{n},{k}": special_count(n, k) for (n, k) in SPECIAL_COUNTS}
    want = {f"{n},{k}": c for (n, k), c in SPECIAL_COUNTS.items()}
    return {"counts": got, "ok": got == want}


def _relation_set(deps: List[Dict[str, int]]) -> set:
    return {tuple(sorted(d.items())) for d in deps}


def dependency_case(n: int, k: int) -> dict:
    rank, deps = linear_dependencies(n, k)
    size = len(generic_family(n, k))
    want = EXPECTED_DEPENDENCIES.get((n, k), [])
    ok = rank == size - len(want) and _relation_set(deps) == _relation_set(want)
    return {"rank": rank, "size": size, "dependencies": deps, "expected": want, "ok": ok}


def free_weight_case(part: str) -> dict:
    if part == "a":
        got = free_weight_exceptions(range(2, 9), range(1, 11), "Z_N")
        want = EXPECTED_FREE_ZN
    else:
        got = free_weight_exceptions(range(3, 9), range(3, 9), "D_N")
        want = EXPECTED_FREE_DN
    got = sorted(got)
    return {"part": part, "exceptions": [list(x) for x in got], "ok": got == want}


def fixed_point_case() -> dict:
    got = fixed_point_failures(range(2, 13), range(3, 13))
    return {"failures": [list(x) for x in got], "ok": got == EXPECTED_FIXED_POINT}


def local_dimension_case(n: int, k_max: int, rel_tol: float) -> dict:
    bad = []
    for k in range(1, k_max + 1):
        for m in eligible_m(n, k):
            rep = convention_report(PointedAlgebra(LevelRank(n, k), m), "untwisted", rel_tol)
            if not (rep["vacuum_local"] and rep["dimension_ok"]):
                bad.append({"k": k, "m": m, "report": rep})
    return {"failures": bad, "ok": not bad}


def convention_case() -> dict:
    chosen = select_locality_convention(4, 4, 2)
    return {"selected": chosen, "ok": chosen == "untwisted"}


def sl66_case(settings: Settings) -> dict:
    from fusionmod.sl66 import certify

    cache = settings.cache_dir if settings.cache_enabled else None
    data = modular_data(LevelRank(6, 6), cache, settings.smatrix_tol, settings.max_alcove)
    rep = certify(data, settings.commute_tol)
    rep.pop("reports", None)
    return rep


# ---------------------------------- Runner ----------------------------------


def _ranges(suite: str) -> Tuple[int, int, int, int]:
    if suite not in DEFAULT_RANGES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES} or 'all'")
    return DEFAULT_RANGES[suite]


def suite_cases(suite: str, settings: Settings, n_max: int, k_max: int) -> List[Case]:
    n_min, _, k_min, _ = _ranges(suite)
    if suite == "arith":
        return [Case(f"arith N={n}", arith_case, (n, k_max)) for n in range(n_min, n_max + 1)]
    if suite == "invariants":
        return [
            Case(f"invariants N={n} k={k}", invariants_case, (n, k, settings))
            for n in range(n_min, n_max + 1)
            for k in range(k_min, k_max + 1)
        ]
    if suite == "branching":
        return [
            Case(f"branching {t}" + (f" N={n}" if n is not None else ""), branching_case, (t, n, settings.dimension_tol))
            for t, n in branching_targets(n_max)
        ]
    if suite == "cosets":
        cases = [Case(f"cosets m'={mp} j={j}", coset_model_case, (mp, j)) for mp in range(1, 13) for j in range(4)]
        cases += [Case(f"cosets N={n}", coset_pointed_case, (n, k_max)) for n in range(n_min, n_max + 1)]
        cases.append(Case("cosets exceptional", coset_exceptional_case))
        return cases
    cases = [Case(f"generic count N={n}", generic_count_case, (n, k_max)) for n in range(n_min, n_max + 1)]
    cases.append(Case("special counts", special_counts_case))
    pairs = list(EXPECTED_DEPENDENCIES) + list(INDEPENDENT_SAMPLES)
    cases += [Case(f"dependencies N={n} k={k}", dependency_case, (n, k)) for n, k in pairs]
    cases += [Case(f"stabiliser scan {p}", free_weight_case, (p,)) for p in ("a", "b")]
    cases.append(Case("fixed-point scan", fixed_point_case))
    cases += [
        Case(f"local dimension N={n}", local_dimension_case, (n, 9, settings.dimension_tol))
        for n in range(2, 8)
    ]
    cases.append(Case("locality convention", convention_case))
    cases.append(Case("sl6 level 6", sl66_case, (settings,)))
    return cases


def run_cases(cases: Sequence[Case], workers: int = 1) -> List[dict]:
    if workers <= 1 or len(cases) <= 1:
        out = []
        for case in cases:
            logger.debug("running %s", case.name)
            out.append(_run_case(case))
        return out
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_case, cases))


def run_suite(suite: str, settings: Settings, n_max: Optional[int] = None, k_max: Optional[int] = None) -> dict:
    _, n_def, _, k_def = _ranges(suite)
    n_max = n_max if n_max is not None else settings.suite_range(suite, "n_max", n_def)
    k_max = k_max if k_max is not None else settings.suite_range(suite, "k_max", k_def)
    cases = suite_cases(suite, settings, n_max, k_max)
    logger.info("suite %s: %d cases (n_max=%d, k_max=%d, workers=%d)", suite, len(cases), n_max, k_max, settings.workers)
    results = run_cases(cases, settings.workers)
    failed = [r for r in results if not r.get("ok")]
    logger.info("suite %s: %d/%d cases passed", suite, len(results) - len(failed), len(results))
    return {
        "suite": suite,
        "n_max": n_max,
        "k_max": k_max,
        "cases": [{"case": r["case"], "ok": bool(r.get("ok"))} for r in results],
        "failures": failed,
        "ok": not failed,
    }
