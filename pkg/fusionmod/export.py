#!/usr/bin/env python
"""
Writers for command results.

  json  byte-stable dumps (sorted keys, fixed separators)
  csv   pandas DataFrame.to_csv(index=False)
  md    DataFrame.to_markdown (tabulate pipe format)
  png   heatmap of an invariant matrix (Pillow, optional)

All file writes go through the atomic writers.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Any, Optional

# Pillow (optional; only needed for --png)
try:
    from PIL import Image  # type: ignore
    HAVE_PIL = True
except Exception:
    HAVE_PIL = False

import numpy as np

from fusionmod.invariants import IntMatrix
from fusionmod.utils.atomic_write import atomic_write_bytes, atomic_write_text, dumps_stable

FORMATS = ("json", "csv", "md")


def frame_to_csv(df) -> str:
    return df.to_csv(index=False, lineterminator="\n")


def _escape_pipe(v: Any) -> Any:
    return v.replace("|", "\\|") if isinstance(v, str) else v


def frame_to_markdown(df) -> str:
    """Pipe table via DataFrame.to_markdown; missing cells are blank and literal pipes escaped."""
    cells = df.astype(object).where(df.notna(), "")
    cells = cells.apply(lambda col: col.map(_escape_pipe))
    return cells.to_markdown(index=False, tablefmt="pipe") + "\n"


def render(obj: Any, fmt: str, frame=None) -> str:
    """Text for one result. Tabular formats need a frame; json ignores it."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if fmt == "json" or frame is None:
        return dumps_stable(obj)
    if fmt == "csv":
        return frame_to_csv(frame)
    return frame_to_markdown(frame)


def write_result(path: Path, obj: Any, fmt: str, frame=None) -> None:
    atomic_write_text(Path(path), render(obj, fmt, frame))


def records_frame(records):
    import pandas as pd

    return pd.DataFrame.from_records(list(records))


def heatmap_array(z: IntMatrix, max_side: int = 2048) -> np.ndarray:
    """uint8 grey levels: 255 for zero, darker with larger entries; block-max downsampled."""
    size = z.size
    scale = max(1, -(-size // max_side))
    side = -(-size // scale)
    img = np.zeros((side, side), dtype=np.int64)
    coo = z.data.tocoo()
    np.maximum.at(img, (coo.row // scale, coo.col // scale), coo.data)
    top = int(img.max()) if img.size else 0
    if top <= 0:
        return np.full((side, side), 255, dtype=np.uint8)
    shade = 255 - (64 + (191 * img) // top)
    return np.where(img > 0, shade, 255).astype(np.uint8)


def heatmap_png(z: IntMatrix, max_side: int = 2048) -> bytes:
    if not HAVE_PIL:
        raise RuntimeError("Pillow is not installed")
    im = Image.fromarray(heatmap_array(z, max_side))
    buf = io.BytesIO()
    im.save(buf, "PNG", optimize=True)
    return buf.getvalue()


def write_heatmap(path: Path, z: IntMatrix, max_side: int = 2048) -> Optional[Path]:
    """Write the PNG; returns None when Pillow is unavailable."""
    if not HAVE_PIL:
        return None
    path = Path(path)
    atomic_write_bytes(path, heatmap_png(z, max_side))
    return path
