#!/usr/bin/env python
"""
Settings loader for fusionmod.

config.yaml is optional. Resolution order for every value:
  explicit CLI flag  >  environment (FUSIONMOD_CACHE for the cache dir)  >  config.yaml  >  default

A missing file, unparsable YAML or a top level that is not a mapping all yield the
defaults; the last two are logged.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

logger = logging.getLogger(__name__)

CACHE_ENV = "FUSIONMOD_CACHE"

DEFAULT_CACHE_DIR = ".fusionmod_cache"
DEFAULT_SMATRIX_TOL = 1e-8
DEFAULT_COMMUTE_TOL = 1e-6
DEFAULT_DIMENSION_TOL = 1e-6
DEFAULT_MAX_ALCOVE = 2500
FORMATS = ("json", "csv", "md")


def load_config(path: str | Path) -> Dict[str, Any]:
    p = Path(path)
    if not p.is_file():
        return {}
    try:
        data = yaml.safe_load(p.read_text(encoding="utf-8"))
    except (OSError, UnicodeDecodeError, yaml.YAMLError) as e:
        logger.warning("ignoring unreadable config %s: %s", p, e)
        return {}
    if data is None:
        return {}
    if not isinstance(data, dict):
        logger.warning("ignoring config %s: top level is %s, not a mapping", p, type(data).__name__)
        return {}
    return data


def _number(v: Any, fallback: float) -> float:
    return float(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else fallback


def _positive_int(v: Any, fallback: int) -> int:
    return v if isinstance(v, int) and not isinstance(v, bool) and v > 0 else fallback


@dataclass(frozen=True)
class Settings:
    cache_dir: Path = Path(DEFAULT_CACHE_DIR)
    cache_enabled: bool = True
    smatrix_tol: float = DEFAULT_SMATRIX_TOL
    commute_tol: float = DEFAULT_COMMUTE_TOL
    dimension_tol: float = DEFAULT_DIMENSION_TOL
    max_alcove: int = DEFAULT_MAX_ALCOVE
    output_format: str = "json"
    workers: int = 1
    ranges: Dict[str, Dict[str, int]] | None = None

    @staticmethod
    def lookup(tree: Mapping[str, Any], *keys: str, default: Any = None) -> Any:
        """tree[k1][k2]...; default as soon as a level is missing or not a mapping."""
        node: Any = tree
        for key in keys:
            if not isinstance(node, Mapping) or key not in node:
                return default
            node = node[key]
        return node

    @classmethod
    def from_mapping(cls, cfg: Mapping[str, Any], cache_override: Optional[str] = None) -> "Settings":
        get = cls.lookup
        cache_dir = cache_override or os.environ.get(CACHE_ENV) or get(cfg, "cache", "dir") or DEFAULT_CACHE_DIR
        enabled = get(cfg, "cache", "enabled", default=True)
        fmt = get(cfg, "output", "format", default="json")
        ranges = get(cfg, "ranges")
        return cls(
            cache_dir=Path(str(cache_dir)),
            cache_enabled=enabled if isinstance(enabled, bool) else True,
            smatrix_tol=_number(get(cfg, "tolerances", "smatrix"), DEFAULT_SMATRIX_TOL),
            commute_tol=_number(get(cfg, "tolerances", "commute"), DEFAULT_COMMUTE_TOL),
            dimension_tol=_number(get(cfg, "tolerances", "dimension"), DEFAULT_DIMENSION_TOL),
            max_alcove=_positive_int(get(cfg, "modular_data", "max_alcove"), DEFAULT_MAX_ALCOVE),
            output_format=fmt if fmt in FORMATS else "json",
            workers=_positive_int(get(cfg, "workers"), 1),
            ranges=ranges if isinstance(ranges, dict) else None,
        )

    @classmethod
    def from_file(cls, path: str | Path, cache_override: Optional[str] = None) -> "Settings":
        return cls.from_mapping(load_config(path), cache_override)

    def suite_range(self, suite: str, key: str, fallback: int) -> int:
        v = self.lookup(self.ranges or {}, suite, key)
        return _positive_int(v, fallback)

    def with_overrides(self, **kw: Any) -> "Settings":
        """Apply non-None CLI overrides on top of resolved settings."""
        clean = {k: v for k, v in kw.items() if v is not None}
        if "cache_dir" in clean:
            clean["cache_dir"] = Path(clean["cache_dir"])
        return replace(self, **clean)
