#!/usr/bin/env python
"""
fusionmod command line.

  python -m fusionmod alcove    --n 6 --k 6 [--weights]
  python -m fusionmod invariant --n 6 --k 6 --d 1 --sign plus [--png z.png] [--check]
  python -m fusionmod invariant --case sl6-6 [--check]
  python -m fusionmod branch    --table plus2 --n 4 [--check]
  python -m fusionmod classify  --n 6 --k 6
  python -m fusionmod table     --case sl6-6 | --n 5 --k 4
  python -m fusionmod cosets    --n 6 --k 6
  python -m fusionmod verify    --suite arith --n-max 60 --k-max 60 [--workers 8]

Global flags: --config, --cache-dir, --format {json,csv,md}, --out, --verbose.
Exit codes: 0 all checks pass, 1 a check failed (JSON report on stdout), 2 bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence, Tuple

from fusionmod.alcove import (
    LevelRank,
    central_charge,
    conformal_weight,
    enumerate_alcove,
    global_dimension,
    qdims,
)
from fusionmod.branching import TABLE_IDS, consistency_check, get_table
from fusionmod.classify import classify, generic_tensor_table, tensor_report
from fusionmod.config import Settings
from fusionmod.cosets import SPECIAL_PAIRS, algebra_coset_table, pointed_rows
from fusionmod.errors import CheckFailure, FusionModError
from fusionmod.export import FORMATS, HAVE_PIL, records_frame, render, write_heatmap
from fusionmod.invariants import MINUS, PLUS, IntMatrix, z_pointed
from fusionmod.modular import is_physical, modular_data
from fusionmod.suites import SUITES, run_suite
from fusionmod.utils.atomic_write import atomic_write_text

logger = logging.getLogger("fusionmod")

CASES = ("sl6-6",)
Result = Tuple[int, Any, Any]  # exit code, JSON payload, optional DataFrame


def _frac(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _need_level(args) -> LevelRank:
    if args.n is None or args.k is None:
        raise ValueError("--n and --k are required")
    return LevelRank(args.n, args.k)


def _modular(ctx: LevelRank, settings: Settings):
    cache = settings.cache_dir if settings.cache_enabled else None
    return modular_data(ctx, cache, settings.smatrix_tol, settings.max_alcove)


# --------------------------------- Commands -----------------------------------


def cmd_alcove(args, settings: Settings) -> Result:
    ctx = _need_level(args)
    index = enumerate_alcove(ctx)
    payload = {
        "n": ctx.n,
        "k": ctx.k,
        "size": len(index),
        "central_charge": _frac(central_charge(ctx)),
        "global_dimension": global_dimension(ctx),
    }
    frame = None
    if args.weights:
        dims = qdims(index)
        recs = [
            {
                "index": i,
                "rows": " ".join(map(str, w.short())),
                "boxes": w.boxes,
                "t": w.boxes % ctx.n,
                "h": _frac(conformal_weight(w)),
                "qdim": float(dims[i]),
            }
            for i, w in enumerate(index)
        ]
        payload["weights"] = [{**r, "rows": w.short()} for r, w in zip(recs, index)]
        frame = records_frame(recs)
    return 0, payload, frame


def _png_path(base: Path, label: Optional[str]) -> Path:
    if label is None:
        return base
    safe = label.replace("+", "p").replace("-", "m")
    return base.with_name(f"{base.stem}_{safe}{base.suffix or '.png'}")


def _write_png(args, z: IntMatrix, label: Optional[str] = None) -> None:
    if not args.png:
        return
    if not HAVE_PIL:
        logger.warning("Pillow is not installed; --png skipped")
        return
    path = write_heatmap(_png_path(Path(args.png), label), z)
    logger.info("heatmap written: %s", path)


def _triplet_frame(z: IntMatrix, label: Optional[str] = None):
    index = z.index
    recs = []
    for i, j, v in z.triplets():
        rec = {"row": i, "col": j, "row_weight": str(index[i].short()), "col_weight": str(index[j].short()), "value": v}
        if label is not None:
            rec = {"invariant": label, **rec}
        recs.append(rec)
    return records_frame(recs)


def cmd_invariant(args, settings: Settings) -> Result:
    if args.case:
        return _invariant_case(args, settings)
    ctx = _need_level(args)
    if args.d is None or args.sign is None:
        raise ValueError("--d and --sign are required unless --case is given")
    sign = PLUS if args.sign == "plus" else MINUS
    z = z_pointed(ctx.n, ctx.k, args.d, sign)
    _write_png(args, z)
    payload = z.to_json()
    payload.update({"d": args.d, "sign": args.sign})
    code = 0
    if args.check:
        rep = is_physical(z, _modular(ctx, settings), settings.commute_tol)
        payload["check"] = rep
        code = 0 if rep["physical"] else 1
    return code, payload, _triplet_frame(z)


def _invariant_case(args, settings: Settings) -> Result:
    from fusionmod.sl66 import CTX, certify, sl66_invariants

    if (args.n, args.k) not in ((None, None), (CTX.n, CTX.k)):
        raise ValueError(f"--case {args.case} is fixed at N={CTX.n}, k={CTX.k}")
    mats = sl66_invariants()
    for lbl, z in mats.items():
        _write_png(args, z, lbl)
    payload = {"case": args.case, "n": CTX.n, "k": CTX.k, "invariants": {lbl: z.to_json() for lbl, z in mats.items()}}
    code = 0
    if args.check:
        rep = certify(_modular(CTX, settings), settings.commute_tol)
        payload["check"] = rep
        code = 0 if rep["ok"] else 1
    frame = None
    if args.format in ("csv", "md"):
        import pandas as pd

        frame = pd.concat([_triplet_frame(z, lbl) for lbl, z in mats.items()], ignore_index=True)
    return code, payload, frame


def cmd_branch(args, settings: Settings) -> Result:
    table = get_table(args.table, args.n)
    payload = table.to_json()
    if table.notes:
        payload["notes"] = list(table.notes)
    recs = [
        {"label": r["label"], "weight": " ".join(map(str, w)) or "0", "multiplicity": m}
        for r in payload["rows"]
        for w, m in r["weights"]
    ]
    code = 0
    if args.check:
        rep = consistency_check(table, rel_tol=settings.dimension_tol)
        payload["check"] = rep
        code = 0 if (rep["ok"] and rep["grading"]) else 1
    return code, payload, records_frame(recs)


def cmd_classify(args, settings: Settings) -> Result:
    ctx = _need_level(args)
    payload = classify(ctx.n, ctx.k)
    if payload["exceptional"]:
        frame = records_frame(payload["algebras"])
    else:
        frame = records_frame(payload["labels"])
    return 0, payload, frame


def cmd_table(args, settings: Settings) -> Result:
    if args.case:
        from fusionmod.sl66 import compare_tables, printed_table, sl66_table

        table = sl66_table()
        mism = compare_tables(table, printed_table())
        payload = {"case": args.case, **table.to_json(), "mismatches": mism}
        return (1 if mism else 0), payload, table.to_frame()
    ctx = _need_level(args)
    table = generic_tensor_table(ctx.n, ctx.k)
    payload = {"n": ctx.n, "k": ctx.k, **table.to_json()}
    code = 0
    if args.check:
        rep = tensor_report(ctx.n, ctx.k)
        payload["check"] = rep
        code = 1 if rep["status"] == "failed" else 0
    return code, payload, table.to_frame()


def cmd_cosets(args, settings: Settings) -> Result:
    ctx = _need_level(args)
    if (ctx.n, ctx.k) in SPECIAL_PAIRS:
        rows = algebra_coset_table(ctx.n, ctx.k)
    else:
        rows = pointed_rows(ctx.n, ctx.k)
    recs = [r.to_json() for r in rows]
    payload = {"n": ctx.n, "k": ctx.k, "rows": recs, "total": sum(r.count for r in rows)}
    return 0, payload, records_frame(recs)


def cmd_verify(args, settings: Settings) -> Result:
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = [run_suite(s, settings, args.n_max, args.k_max) for s in names]
    ok = all(r["ok"] for r in reports)
    payload = {"suites": reports, "ok": ok}
    recs = [{"suite": r["suite"], **c} for r in reports for c in r["cases"]]
    return (0 if ok else 1), payload, records_frame(recs)


COMMANDS = {
    "alcove": cmd_alcove,
    "invariant": cmd_invariant,
    "branch": cmd_branch,
    "classify": cmd_classify,
    "table": cmd_table,
    "cosets": cmd_cosets,
    "verify": cmd_verify,
}


# ---------------------------------- Parser ------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default="config.yaml", help="Path to config.yaml")
    common.add_argument("--cache-dir", default=None, help="ModularData cache directory (overrides config and env)")
    common.add_argument("--format", choices=FORMATS, default=None, help="Output format (default from config, else json)")
    common.add_argument("--out", default=None, help="Write the result to this file instead of stdout")
    common.add_argument("--verbose", action="store_true", help="DEBUG logging")

    level = argparse.ArgumentParser(add_help=False)
    level.add_argument("--n", type=int, default=None, help="Rank N of sl_N")
    level.add_argument("--k", type=int, default=None, help="Level k")

    ap = argparse.ArgumentParser(prog="fusionmod", description="Module categories over C(sl_N, k).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alcove", parents=[common, level], help="Alcove size, central charge, weights")
    p.add_argument("--weights", action="store_true", help="List every weight with t, h and qdim")

    p = sub.add_parser("invariant", parents=[common, level], help="Build a modular invariant")
    p.add_argument("--d", type=int, default=None, help="Divisor d of Z(d, sign)")
    p.add_argument("--sign", choices=("plus", "minus"), default=None)
    p.add_argument("--case", choices=CASES, default=None, help="Named invariant set")
    p.add_argument("--png", default=None, help="Write a heatmap PNG")
    p.add_argument("--check", action="store_true", help="Certify physicality")

    p = sub.add_parser("branch", parents=[common], help="Conformal-embedding branching table")
    p.add_argument("--table", choices=TABLE_IDS, required=True)
    p.add_argument("--n", type=int, default=None, help="N for the plus2/minus2/adjoint/so_ext families")
    p.add_argument("--check", action="store_true", help="q-dimension consistency and grading check")

    sub.add_parser("classify", parents=[common, level], help="Count and label the module categories")

    p = sub.add_parser("table", parents=[common, level], help="Relative tensor product table")
    p.add_argument("--case", choices=CASES, default=None)
    p.add_argument("--check", action="store_true", help="Verify the generic rule on matrices")

    sub.add_parser("cosets", parents=[common, level], help="Per-algebra double-coset counts")

    p = sub.add_parser("verify", parents=[common], help="Run verification suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--workers", type=int, default=None, help="Process pool size")
    return ap


def resolve_settings(args) -> Settings:
    settings = Settings.from_file(args.config, args.cache_dir)
    fmt = args.format or settings.output_format
    workers = getattr(args, "workers", None)
    if workers is not None and workers < 1:
        raise ValueError(f"--workers must be >= 1, got {workers}")
    args.format = fmt
    return settings.with_overrides(output_format=fmt, workers=workers)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s: %(message)s",
    )

    try:
        settings = resolve_settings(args)
        code, payload, frame = COMMANDS[args.command](args, settings)
    except CheckFailure as e:
        sys.stdout.write(render({"ok": False, "error": str(e), "report": e.report}, "json"))
        return 1
    except (FusionModError, ValueError, KeyError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 2
    except ImportError as e:
        print(f"ERROR: {e.name or e} is not installed", file=sys.stderr)
        return 2

    fmt = settings.output_format
    # failure reports stay machine-readable whatever the table format
    text = render(payload, "json" if code == 1 else fmt, frame)
    if args.out:
        atomic_write_text(Path(args.out), text)
        logger.info("wrote %s", args.out)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
