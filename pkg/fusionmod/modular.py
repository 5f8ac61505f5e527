#!/usr/bin/env python
"""
Modular data of C(sl_N, k) and physicality certification of integer matrices.

S is evaluated in the ratio-of-alternants form
    S_{lm} ~ exp(2 pi i |x||y| / (N(k+N))) * det[exp(-2 pi i x_a y_b / (k+N))]
with x = lambda + rho in partition coordinates, batched through numpy, then
normalised so that S_00 > 0 and the vacuum row has unit norm.

Cache layout (one file per level/rank):
  <cache_dir>/modular_N{n}_k{k}.json

Above max_alcove weights the dense matrix is neither built nor cached; StreamedS hands
out normalised rows on demand and is_physical checks ZS = SZ one row block at a time.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from fusionmod.alcove import LevelRank, conformal_weight, enumerate_alcove
from fusionmod.config import DEFAULT_COMMUTE_TOL, DEFAULT_MAX_ALCOVE, DEFAULT_SMATRIX_TOL
from fusionmod.errors import UnitarityError
from fusionmod.invariants import IntMatrix
from fusionmod.utils.atomic_write import atomic_write_json

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
# entries of the (rows, cols, N, N) block handed to np.linalg.det at once
DET_BLOCK = 2_000_000
# rows of S held at once by the streamed commutation check
ROW_BLOCK = 256


@dataclass(frozen=True)
class ModularData:
    ctx: LevelRank
    s: np.ndarray
    twists: tuple  # Fraction h mod 1 per alcove weight

    @property
    def t_exponents(self) -> List[Fraction]:
        return list(self.twists)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "n": self.ctx.n,
            "k": self.ctx.k,
            "s": [[[float(z.real), float(z.imag)] for z in row] for row in self.s],
            "twists": [f"{h.numerator}/{h.denominator}" for h in self.twists],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ModularData":
        ctx = LevelRank(int(obj["n"]), int(obj["k"]))
        s = np.array([[complex(re, im) for re, im in row] for row in obj["s"]], dtype=complex)
        twists = tuple(Fraction(t) for t in obj["twists"])
        if s.shape != (len(enumerate_alcove(ctx)),) * 2 or len(twists) != s.shape[0]:
            raise ValueError("cached modular data has the wrong shape")
        return cls(ctx, s, twists)


def _frac_part(h: Fraction) -> Fraction:
    return h - (h.numerator // h.denominator)


def twist_exponents(ctx: LevelRank) -> tuple:
    return tuple(_frac_part(conformal_weight(w)) for w in enumerate_alcove(ctx))


def _shifted_rows(ctx: LevelRank) -> np.ndarray:
    n = ctx.n
    rows = np.array([list(w.rows) + [0] for w in enumerate_alcove(ctx)], dtype=float)
    return rows + (n - 1 - np.arange(n))[None, :]


def _raw_rows(ctx: LevelRank, x: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Unnormalised S rows for the weights at positions idx."""
    n, kap = ctx.n, ctx.kappa
    size = x.shape[0]
    tot = x.sum(axis=1)
    out = np.empty((len(idx), size), dtype=complex)
    chunk = max(1, DET_BLOCK // max(1, size * n * n))
    for start in range(0, len(idx), chunk):
        sel = idx[start:start + chunk]
        arg = x[sel][:, None, :, None] * x[None, :, None, :]
        dets = np.linalg.det(np.exp(-2j * np.pi * arg / kap))
        phase = np.exp(2j * np.pi * np.outer(tot[sel], tot) / (n * kap))
        out[start:start + len(sel)] = phase * dets
    return out


def _row_scale(row0: np.ndarray) -> complex:
    return np.conj(row0[0]) / abs(row0[0]) / np.linalg.norm(row0)


def s_matrix(ctx: LevelRank, tol: float = DEFAULT_SMATRIX_TOL) -> np.ndarray:
    n = ctx.n
    x = _shifted_rows(ctx)
    size = x.shape[0]
    s = _raw_rows(ctx, x, np.arange(size))
    s *= _row_scale(s[0])
    err = float(np.max(np.abs(s @ s.conj().T - np.eye(size))))
    if err > tol:
        raise UnitarityError(f"S not unitary at N={n}, k={ctx.k}: max deviation {err:.3e}")
    logger.debug("S-matrix N=%d k=%d size=%d unitarity %.2e", n, ctx.k, size, err)
    return s


def build_modular_data(ctx: LevelRank, tol: float = DEFAULT_SMATRIX_TOL) -> ModularData:
    return ModularData(ctx, s_matrix(ctx, tol), twist_exponents(ctx))


class StreamedS:
    """Normalised rows of S on demand, for alcoves too large to hold S densely."""

    def __init__(self, ctx: LevelRank, tol: float = DEFAULT_SMATRIX_TOL):
        self.ctx = ctx
        self.tol = tol
        self._x = _shifted_rows(ctx)
        self._scale = _row_scale(_raw_rows(ctx, self._x, np.array([0]))[0])
        self.twists = twist_exponents(ctx)

    @property
    def size(self) -> int:
        return self._x.shape[0]

    def rows(self, idx: Sequence[int]) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        out = _raw_rows(self.ctx, self._x, idx) * self._scale
        if len(idx):
            err = float(np.max(np.abs(np.linalg.norm(out, axis=1) - 1.0)))
            if err > self.tol:
                raise UnitarityError(f"S rows not unit length at N={self.ctx.n}, k={self.ctx.k}: {err:.3e}")
        return out

    def commutator_max(self, z: IntMatrix, block: int = ROW_BLOCK) -> float:
        """max |ZS - SZ| one row block at a time; (ZS)[B] only needs the S rows in the support of Z[B]."""
        zc = z.data.tocsr()
        zt = zc.transpose().tocsr()
        dev = 0.0
        for start in range(0, self.size, block):
            b = np.arange(start, min(start + block, self.size))
            sz = np.asarray(zt.dot(self.rows(b).T)).T
            zb = zc[b]
            support = np.unique(zb.indices)
            if len(support):
                zs = np.asarray(zb[:, support].dot(self.rows(support)))
            else:
                zs = np.zeros_like(sz)
            dev = max(dev, float(np.max(np.abs(zs - sz))))
        logger.debug("streamed commutator N=%d k=%d: %.2e", self.ctx.n, self.ctx.k, dev)
        return dev


Modular = Union[ModularData, StreamedS]


def cache_path(cache_dir: Path, ctx: LevelRank) -> Path:
    return Path(cache_dir) / f"modular_N{ctx.n}_k{ctx.k}.json"


def modular_data(
    ctx: LevelRank,
    cache_dir: Optional[Path] = None,
    tol: float = DEFAULT_SMATRIX_TOL,
    max_alcove: int = DEFAULT_MAX_ALCOVE,
) -> Modular:
    """Cached modular data, or row-streamed S when the alcove is larger than max_alcove."""
    size = len(enumerate_alcove(ctx))
    if size > max_alcove:
        logger.warning("alcove N=%d k=%d has %d weights (> %d); S rows streamed, not cached", ctx.n, ctx.k, size, max_alcove)
        return StreamedS(ctx, tol)
    path = cache_path(cache_dir, ctx) if cache_dir is not None else None
    if path is not None and path.exists():
        try:
            obj = json.loads(path.read_text(encoding="utf-8"))
            if obj.get("schema_version") == SCHEMA_VERSION:
                logger.info("modular data cache hit: %s", path)
                return ModularData.from_json(obj)
        except (OSError, ValueError, KeyError, TypeError):
            pass
        logger.info("modular data cache stale: %s", path)
    md = build_modular_data(ctx, tol)
    if path is not None:
        atomic_write_json(path, md.to_json())
        logger.info("modular data cached: %s", path)
    return md


# ---------------------------------- Physicality ----------------------------------


def is_physical(z: IntMatrix, data: Optional[Modular] = None, tol: float = DEFAULT_COMMUTE_TOL) -> dict:
    """Certification report; 'commutes' is None when no modular data is passed."""
    vacuum = z[0, 0] == 1
    nonneg = z.min_entry() >= 0
    twists = data.twists if data is not None else twist_exponents(z.ctx)
    coo = z.data.tocoo()
    bad = [(int(i), int(j)) for i, j in zip(coo.row, coo.col) if twists[i] != twists[j]]
    commutes = None
    deviation = None
    if isinstance(data, StreamedS):
        deviation = data.commutator_max(z)
        commutes = deviation < tol
    elif data is not None:
        zd = z.dense().astype(float)
        deviation = float(np.max(np.abs(zd @ data.s - data.s @ zd)))
        commutes = deviation < tol
    physical = vacuum and nonneg and not bad and commutes is not False
    return {
        "n": z.ctx.n,
        "k": z.ctx.k,
        "vacuum": vacuum,
        "nonnegative": nonneg,
        "commutes": commutes,
        "commutator_max": deviation,
        "twist_violations": [list(p) for p in bad[:20]],
        "twists": not bad,
        "skipped": [] if data is not None else ["commutes"],
        "physical": physical,
    }
