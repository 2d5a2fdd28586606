"""Named DC functions and the declarative function document.

A function document is a JSON object such as ``{"builtin": "poly5cos", "window": 1.0}``
or ``{"builtin": "pl", "breakpoints": [...], "values": [...]}``.
"""
from __future__ import annotations

import json
import math
import os
from typing import Callable, Dict

import numpy as np

from ..utils.error_handler import ConfigError, DCDistError
from ..utils.logger import logger
from .convex import ClosedFormConvex, PiecewiseLinear1D, zero_convex
from .dc_function import DCFunction1D
from .interpolation import canonical_pl_split


def _square() -> ClosedFormConvex:
    return ClosedFormConvex("x^2", lambda x: x * x, lambda x: 2.0 * x)


def _scaled_square(c: float, domain=(-np.inf, np.inf)) -> ClosedFormConvex:
    return ClosedFormConvex(f"{c}*x^2", lambda x: c * x * x, lambda x: 2.0 * c * x, domain=domain)


def _abs() -> ClosedFormConvex:
    return ClosedFormConvex(
        "|x|",
        np.abs,
        right=lambda x: np.where(x >= 0, 1.0, -1.0),
        left=lambda x: np.where(x > 0, 1.0, -1.0),
        kink_points=(0.0,),
    )


def poly5cos_value(x):
    """g(x) = x^5 cos(pi/x), g(0) = 0."""
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    return np.where(x == 0.0, 0.0, x**5 * np.cos(np.pi / safe))


def poly5cos_derivative(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    values = 5.0 * x**4 * np.cos(np.pi / safe) + np.pi * x**3 * np.sin(np.pi / safe)
    return np.where(x == 0.0, 0.0, values)


def poly5cos_second_derivative(x):
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    values = x * (8.0 * np.pi * x * np.sin(np.pi / safe) - (np.pi**2 - 20.0 * x**2) * np.cos(np.pi / safe))
    return np.where(x == 0.0, 0.0, values)


def poly5cos_convexifier(window: float) -> float:
    """c with g + c x^2 convex on [-window, window]: 2c bounds |g''| there."""
    w = float(window)
    return w * (8.0 * math.pi * w + math.pi**2 + 20.0 * w * w) / 2.0


def quadratic() -> DCFunction1D:
    return DCFunction1D(_square(), zero_convex(), "x^2")


def absolute() -> DCFunction1D:
    return DCFunction1D(_abs(), zero_convex(), "|x|")


def sq_minus_abs() -> DCFunction1D:
    return DCFunction1D(_square(), _abs(), "x^2-|x|")


def neg_quadratic() -> DCFunction1D:
    return DCFunction1D(zero_convex(), _square(), "-x^2")


def constant(value: float = 0.0) -> DCFunction1D:
    value = float(value)
    g = ClosedFormConvex(f"{value}", lambda x: np.full(np.shape(x), value), lambda x: np.zeros(np.shape(x)))
    return DCFunction1D(g, zero_convex(), f"const({value})")


def max5() -> DCFunction1D:
    g = ClosedFormConvex(
        "max(x^5,0)",
        lambda x: np.maximum(x, 0.0) ** 5,
        lambda x: 5.0 * np.maximum(x, 0.0) ** 4,
    )
    return DCFunction1D(g, zero_convex(), "max(x^5,0)")


def poly5cos(window: float = 1.0) -> DCFunction1D:
    if window <= 0:
        raise ConfigError(f"poly5cos window must be positive, got {window}")
    c = poly5cos_convexifier(window)
    domain = (-float(window), float(window))
    g = ClosedFormConvex(
        f"x^5cos(pi/x)+{c:.6g}x^2",
        lambda x: poly5cos_value(x) + c * x * x,
        lambda x: poly5cos_derivative(x) + 2.0 * c * x,
        domain=domain,
    )
    return DCFunction1D(g, _scaled_square(c, domain), "x^5cos(pi/x)")


def pl(breakpoints, values) -> DCFunction1D:
    u, v = canonical_pl_split(PiecewiseLinear1D(breakpoints, values))
    return DCFunction1D(u, v, "pl")


BUILTINS: Dict[str, Callable[..., DCFunction1D]] = {
    "quadratic": quadratic,
    "abs": absolute,
    "sq_minus_abs": sq_minus_abs,
    "neg_quadratic": neg_quadratic,
    "constant": constant,
    "max5": max5,
    "poly5cos": poly5cos,
    "pl": pl,
}


def function_from_dict(doc: dict) -> DCFunction1D:
    if not isinstance(doc, dict) or "builtin" not in doc:
        raise ConfigError("Function document needs a 'builtin' key")
    params = {k: v for k, v in doc.items() if k != "builtin"}
    name = doc["builtin"]
    if name not in BUILTINS:
        raise ConfigError(f"Unknown builtin function {name!r}; known: {', '.join(sorted(BUILTINS))}")
    try:
        return BUILTINS[name](**params)
    except TypeError as e:
        raise ConfigError(f"Bad parameters for builtin {name!r}: {e}") from e
    except DCDistError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Builtin {name!r} rejected its parameters: {e}") from e


def load_function(spec: str) -> DCFunction1D:
    """Resolve a builtin name or a path to a JSON function document."""
    if spec in BUILTINS:
        return function_from_dict({"builtin": spec})
    if not os.path.isfile(spec):
        raise ConfigError(f"{spec!r} is neither a builtin function nor a readable file")
    logger.debug(f"Loading function document {spec}")
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Could not read function document {spec}: {e}") from e
    return function_from_dict(doc)
