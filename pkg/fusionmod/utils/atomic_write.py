from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any


def _replace_from_temp(path: Path, mode: str, payload, **open_kw) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile(mode, delete=False, dir=str(path.parent),
                                     prefix=f".{path.name}.", suffix=".tmp", **open_kw) as tmp:
        tmp.write(payload)
        tmp.flush()
        os.fsync(tmp.fileno())
        tmp_name = tmp.name
    try:
        os.replace(tmp_name, path)
    except OSError:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def atomic_write_text(path: Path, text: str) -> None:
    _replace_from_temp(path, "w", text, encoding="utf-8", newline="")


def atomic_write_bytes(path: Path, data: bytes) -> None:
    _replace_from_temp(path, "wb", data)


def dumps_stable(obj: Any) -> str:
    """Byte-stable JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def atomic_write_json(path: Path, obj: Any) -> None:
    atomic_write_text(path, dumps_stable(obj))
