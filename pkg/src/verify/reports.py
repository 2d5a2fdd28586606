from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np


def _plain(value: Any) -> Any:
    """JSON-ready copy: numpy to builtins, non-finite floats to strings."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


@dataclass
class CheckReport:
    name: str
    samples: int
    residual: float
    tolerance: float
    seed: Optional[int] = None
    witness: Any = None
    details: Dict[str, Any] = field(default_factory=dict)
    passed: Optional[bool] = None

    def __post_init__(self):
        self.residual = float(self.residual)
        if self.passed is None:
            self.passed = bool(self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return _plain(
            {
                "name": self.name,
                "samples": self.samples,
                "residual": self.residual,
                "tolerance": self.tolerance,
                "seed": self.seed,
                "witness": self.witness,
                "details": self.details,
                "pass": self.passed,
            }
        )


@dataclass(frozen=True)
class DerivEstimate:
    point: tuple
    direction: tuple
    value: float
    steps: tuple
    residual: float


def worst(name: str, residuals: np.ndarray, witnesses: Sequence, tolerance: float, seed=None, **details) -> CheckReport:
    """Report on the largest residual of a batch (zero samples pass vacuously)."""
    residuals = np.asarray(residuals, dtype=float)
    if residuals.size == 0:
        return CheckReport(name, 0, 0.0, tolerance, seed, None, details)
    bad = ~np.isfinite(residuals)
    i = int(np.argmax(bad)) if np.any(bad) else int(np.argmax(residuals))
    residual = math.inf if np.any(bad) else float(residuals[i])
    return CheckReport(name, int(residuals.size), residual, tolerance, seed, witnesses[i], details)


def suite_document(suite: str, seed: int, reports: List[CheckReport]) -> dict:
    return {
        "suite": suite,
        "seed": seed,
        "pass": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }


def dumps(document: dict) -> str:
    return json.dumps(_plain(document), sort_keys=True, indent=2) + "\n"
