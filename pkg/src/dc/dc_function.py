from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..geometry.isometry import PlanarIsometry
from ..utils.error_handler import DomainError
from .convex import (
    ConvexFunction,
    ConvexMax,
    ConvexPL,
    ShiftedConvex,
    check_in_domain,
    convex_scale,
    convex_sum,
    is_midpoint_convex,
    merged_kinks,
)


@dataclass(frozen=True, eq=False)
class DCFunction1D:
    """f = g - h with g, h convex on a common interval."""

    g: ConvexFunction
    h: ConvexFunction
    name: str = "f"
    validate: bool = True

    def __post_init__(self):
        a, b = self.domain
        if not a < b:
            raise DomainError(f"{self.name}: components have no common domain")
        if self.validate:
            for label, part in (("g", self.g), ("h", self.h)):
                if not isinstance(part, ConvexPL) and not is_midpoint_convex(part):
                    raise DomainError(f"{self.name}: component {label} fails the midpoint convexity test")

    @property
    def domain(self) -> Tuple[float, float]:
        return (max(self.g.domain[0], self.h.domain[0]), min(self.g.domain[1], self.h.domain[1]))

    @property
    def kinks(self) -> np.ndarray:
        return merged_kinks([self.g, self.h])

    @property
    def is_piecewise_linear(self) -> bool:
        return isinstance(self.g, ConvexPL) and isinstance(self.h, ConvexPL)

    def __call__(self, x):
        check_in_domain(x, self.domain)
        values = np.asarray(self.g(x)) - np.asarray(self.h(x))
        return float(values) if np.ndim(x) == 0 else values

    def derivative(self, x, side: str = "+"):
        check_in_domain(x, self.domain, side)
        values = np.asarray(self.g.derivative(x, side)) - np.asarray(self.h.derivative(x, side))
        return float(values) if np.ndim(x) == 0 else values

    # DC algebra: every result carries explicit convex components.

    def __neg__(self) -> "DCFunction1D":
        return DCFunction1D(self.h, self.g, f"-({self.name})", validate=False)

    def __add__(self, other: "DCFunction1D") -> "DCFunction1D":
        return DCFunction1D(
            convex_sum(self.g, other.g), convex_sum(self.h, other.h), f"({self.name} + {other.name})", validate=False
        )

    def __sub__(self, other: "DCFunction1D") -> "DCFunction1D":
        return self + (-other)

    def scale(self, c: float) -> "DCFunction1D":
        if c >= 0:
            return DCFunction1D(convex_scale(c, self.g), convex_scale(c, self.h), f"{c}*{self.name}", validate=False)
        return DCFunction1D(convex_scale(-c, self.h), convex_scale(-c, self.g), f"{c}*{self.name}", validate=False)

    def maximum(self, other: "DCFunction1D") -> "DCFunction1D":
        # max(g1 - h1, g2 - h2) = max(g1 + h2, g2 + h1) - (h1 + h2)
        g = ConvexMax(convex_sum(self.g, other.h), convex_sum(other.g, self.h))
        return DCFunction1D(g, convex_sum(self.h, other.h), f"max({self.name}, {other.name})", validate=False)

    def minimum(self, other: "DCFunction1D") -> "DCFunction1D":
        result = -((-self).maximum(-other))
        return DCFunction1D(result.g, result.h, f"min({self.name}, {other.name})", validate=False)

    def absolute(self) -> "DCFunction1D":
        result = self.maximum(-self)
        return DCFunction1D(result.g, result.h, f"|{self.name}|", validate=False)


def dc_eval(f: DCFunction1D, x: float, direction: str) -> Tuple[float, float]:
    """Value and one-sided derivative of f at x; direction is '+' or '-'."""
    if direction not in ("+", "-"):
        raise DomainError(f"Unknown direction {direction!r}; expected '+' or '-'")
    x = float(x)
    return f(x), f.derivative(x, direction)


def recenter(f: DCFunction1D, x0: float) -> Tuple[DCFunction1D, PlanarIsometry]:
    """Return t -> f(x0 + t) - f(x0) and the translation mapping its graph onto graph f."""
    x0 = float(x0)
    check_in_domain(x0, f.domain)
    g0, h0 = float(f.g(x0)), float(f.h(x0))
    shifted = DCFunction1D(_shift(f.g, x0, g0), _shift(f.h, x0, h0), f"{f.name}(x0+t)-{f.name}(x0)", validate=False)
    return shifted, PlanarIsometry.translation_by(x0, g0 - h0)


def _shift(part: ConvexFunction, x0: float, y0: float) -> ConvexFunction:
    if isinstance(part, ConvexPL):
        return ConvexPL(part.xs - x0, part.ys - y0)
    return ShiftedConvex(part, x0, y0)
