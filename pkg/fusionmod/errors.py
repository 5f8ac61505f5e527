from __future__ import annotations

from typing import Any, Dict, Optional


class FusionModError(Exception):
    """Base class for fusionmod failures."""


class CheckFailure(FusionModError):
    """A certification or oracle comparison did not hold."""

    def __init__(self, message: str, report: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.report = report or {}


class OverflowRisk(FusionModError):
    """An int64 sparse product could exceed the safe bound."""


class UnitarityError(FusionModError):
    """S-matrix normalisation failed beyond tolerance."""
