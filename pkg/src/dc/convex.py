"""Convex functions of one real variable.

Convex functions come in two shapes: piecewise-linear (`ConvexPL`, exact
breakpoints and values) and closed-form evaluators with user-supplied one-sided
derivatives (`ClosedFormConvex`). Everything here is immutable and evaluates
on scalars or numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol, Sequence, Tuple, runtime_checkable

import numpy as np

from ..utils.error_handler import DomainError, EvaluationError

DOMAIN_SLACK = 1e-12
SLOPE_SLACK = 1e-12


def _as_output(values, scalar):
    return float(values) if scalar else values


def _check_side(side):
    if side not in ("+", "-"):
        raise DomainError(f"Unknown derivative side {side!r}; expected '+' or '-'")


def check_in_domain(x, domain, side=None):
    a, b = domain
    x = np.asarray(x, dtype=float)
    lo = a - DOMAIN_SLACK * (1.0 + abs(a)) if np.isfinite(a) else a
    hi = b + DOMAIN_SLACK * (1.0 + abs(b)) if np.isfinite(b) else b
    outside = (x < lo) | (x > hi)
    if side == "+" and np.isfinite(b):
        outside |= x >= b
    if side == "-" and np.isfinite(a):
        outside |= x <= a
    if np.any(outside):
        bad = float(np.ravel(x[outside] if x.ndim else x)[0])
        raise DomainError(f"Point {bad!r} outside domain [{a}, {b}]" + (f" for side {side}" if side else ""))


@runtime_checkable
class ConvexFunction(Protocol):
    domain: Tuple[float, float]

    def __call__(self, x): ...

    def derivative(self, x, side: str = "+"): ...

    @property
    def kinks(self) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class PiecewiseLinear1D:
    """Continuous piecewise-linear function given by breakpoints and values."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float)
        ys = np.array(self.ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
            raise DomainError("Piecewise-linear data needs at least two matching breakpoints and values")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise EvaluationError("Piecewise-linear data must be finite")
        if np.any(np.diff(xs) <= 0):
            raise DomainError("Breakpoints must be strictly increasing")
        xs.setflags(write=False)
        ys.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def a(self) -> float:
        return float(self.xs[0])

    @property
    def b(self) -> float:
        return float(self.xs[-1])

    @property
    def domain(self) -> Tuple[float, float]:
        return (self.a, self.b)

    @property
    def segments(self) -> int:
        return self.xs.size - 1

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.ys) / np.diff(self.xs)

    @property
    def kinks(self) -> np.ndarray:
        return self.xs[1:-1]

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        check_in_domain(x, self.domain)
        values = np.interp(np.clip(x, self.a, self.b), self.xs, self.ys)
        return _as_output(values, scalar)

    def derivative(self, x, side: str = "+"):
        _check_side(side)
        scalar = np.ndim(x) == 0
        check_in_domain(x, self.domain, side)
        x = np.asarray(x, dtype=float)
        if side == "+":
            idx = np.searchsorted(self.xs, x, side="right") - 1
        else:
            idx = np.searchsorted(self.xs, x, side="left") - 1
        idx = np.clip(idx, 0, self.segments - 1)
        return _as_output(self.slopes[idx], scalar)

    def vertices(self) -> np.ndarray:
        return np.column_stack([self.xs, self.ys])

    def __sub__(self, other: "PiecewiseLinear1D") -> "PiecewiseLinear1D":
        if not np.array_equal(self.xs, other.xs):
            raise DomainError("Piecewise-linear difference needs shared breakpoints")
        return PiecewiseLinear1D(self.xs, self.ys - other.ys)

    def __add__(self, other: "PiecewiseLinear1D") -> "PiecewiseLinear1D":
        if not np.array_equal(self.xs, other.xs):
            raise DomainError("Piecewise-linear sum needs shared breakpoints")
        return PiecewiseLinear1D(self.xs, self.ys + other.ys)

    def is_convex(self) -> bool:
        s = self.slopes
        if s.size < 2:
            return True
        # slopes recomputed from rounded values carry an error of a few ulps of y over dx
        ys = np.abs(self.ys)
        rounding = 4.0 * np.finfo(float).eps * np.maximum(ys[:-1], ys[1:]) / np.diff(self.xs)
        slack = SLOPE_SLACK * np.maximum(1.0, np.maximum(np.abs(s[:-1]), np.abs(s[1:])))
        slack = slack + rounding[:-1] + rounding[1:]
        return bool(np.all(s[1:] >= s[:-1] - slack))

    def as_convex(self) -> "ConvexPL":
        return ConvexPL(self.xs, self.ys)


@dataclass(frozen=True, eq=False)
class ConvexPL(PiecewiseLinear1D):
    """Convex piecewise-linear function on [a, b] (slopes nondecreasing)."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_convex():
            s = self.slopes
            i = int(np.argmax(s[:-1] - s[1:]))
            raise DomainError(
                f"Slopes are not nondecreasing at breakpoint {self.xs[i + 1]!r}: {s[i]!r} > {s[i + 1]!r}"
            )


@dataclass(frozen=True, eq=False)
class ClosedFormConvex:
    """Convex function given by a vectorised evaluator and one-sided derivatives."""

    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    right: Callable[[np.ndarray], np.ndarray]
    left: Callable[[np.ndarray], np.ndarray] | None = None
    domain: Tuple[float, float] = (-np.inf, np.inf)
    kink_points: Tuple[float, ...] = ()

    @property
    def kinks(self) -> np.ndarray:
        return np.asarray(self.kink_points, dtype=float)

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        check_in_domain(x, self.domain)
        values = np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)
        return _as_output(values, scalar)

    def derivative(self, x, side: str = "+"):
        _check_side(side)
        scalar = np.ndim(x) == 0
        check_in_domain(x, self.domain, side)
        fn = self.right if side == "+" or self.left is None else self.left
        values = np.asarray(fn(np.asarray(x, dtype=float)), dtype=float)
        if not scalar:
            values = np.broadcast_to(values, np.shape(x)).astype(float)
        return _as_output(values, scalar)


@dataclass(frozen=True, eq=False)
class ShiftedConvex:
    """t -> base(t + shift) - offset."""

    base: ConvexFunction
    shift: float
    offset: float = 0.0

    @property
    def domain(self) -> Tuple[float, float]:
        a, b = self.base.domain
        return (a - self.shift, b - self.shift)

    @property
    def kinks(self) -> np.ndarray:
        return np.asarray(self.base.kinks, dtype=float) - self.shift

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        values = np.asarray(self.base(np.asarray(t, dtype=float) + self.shift)) - self.offset
        return _as_output(values, scalar)

    def derivative(self, t, side: str = "+"):
        return self.base.derivative(np.asarray(t, dtype=float) + self.shift, side)


@dataclass(frozen=True, eq=False)
class ConvexCombination:
    """Nonnegative combination sum_k c_k f_k of convex functions."""

    terms: Tuple[Tuple[float, ConvexFunction], ...]

    def __post_init__(self):
        if any(c < 0 for c, _ in self.terms):
            raise DomainError("Convex combinations need nonnegative coefficients")

    @property
    def domain(self) -> Tuple[float, float]:
        if not self.terms:
            return (-np.inf, np.inf)
        return (max(f.domain[0] for _, f in self.terms), min(f.domain[1] for _, f in self.terms))

    @property
    def kinks(self) -> np.ndarray:
        if not self.terms:
            return np.empty(0)
        return np.unique(np.concatenate([np.asarray(f.kinks, dtype=float) for _, f in self.terms]))

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        total = np.zeros(np.shape(x))
        for c, f in self.terms:
            total = total + c * np.asarray(f(x))
        return _as_output(total, scalar)

    def derivative(self, x, side: str = "+"):
        scalar = np.ndim(x) == 0
        total = np.zeros(np.shape(x))
        for c, f in self.terms:
            total = total + c * np.asarray(f.derivative(x, side))
        return _as_output(total, scalar)


@dataclass(frozen=True, eq=False)
class ConvexMax:
    """Pointwise maximum of two convex functions."""

    first: ConvexFunction
    second: ConvexFunction

    @property
    def domain(self) -> Tuple[float, float]:
        return (max(self.first.domain[0], self.second.domain[0]), min(self.first.domain[1], self.second.domain[1]))

    @property
    def kinks(self) -> np.ndarray:
        return np.unique(np.concatenate([np.asarray(self.first.kinks, float), np.asarray(self.second.kinks, float)]))

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        return _as_output(np.maximum(np.asarray(self.first(x)), np.asarray(self.second(x))), scalar)

    def derivative(self, x, side: str = "+"):
        scalar = np.ndim(x) == 0
        v1, v2 = np.asarray(self.first(x)), np.asarray(self.second(x))
        d1, d2 = np.asarray(self.first.derivative(x, side)), np.asarray(self.second.derivative(x, side))
        tie = np.abs(v1 - v2) <= 1e-14 * (1.0 + np.abs(v1))
        # at a tie the right derivative of the max is the larger slope, the left one the smaller
        at_tie = np.maximum(d1, d2) if side == "+" else np.minimum(d1, d2)
        values = np.where(tie, at_tie, np.where(v1 > v2, d1, d2))
        return _as_output(values, scalar)


def is_midpoint_convex(f: ConvexFunction, samples: int = 33, tol: float = 1e-9, window: float = 10.0) -> bool:
    """Sampled midpoint convexity test on the (clipped) domain of f."""
    a, b = f.domain
    a = max(a, -window)
    b = min(b, window)
    if not a < b:
        return True
    grid = np.linspace(a, b, samples)
    x, y = np.meshgrid(grid, grid)
    x, y = x.ravel(), y.ravel()
    fx, fy, fm = np.asarray(f(x)), np.asarray(f(y)), np.asarray(f(0.5 * (x + y)))
    if not (np.all(np.isfinite(fx)) and np.all(np.isfinite(fm))):
        raise EvaluationError("Convexity test met a non-finite value")
    scale = 1.0 + np.maximum(np.abs(fx), np.abs(fy))
    return bool(np.all(fm <= 0.5 * (fx + fy) + tol * scale))


def zero_convex() -> ConvexCombination:
    return ConvexCombination(())


def convex_sum(*fs: ConvexFunction) -> ConvexFunction:
    flat = []
    for f in fs:
        if isinstance(f, ConvexCombination):
            flat.extend(f.terms)
        else:
            flat.append((1.0, f))
    return ConvexCombination(tuple(flat))


def convex_scale(c: float, f: ConvexFunction) -> ConvexFunction:
    if isinstance(f, ConvexCombination):
        return ConvexCombination(tuple((c * k, g) for k, g in f.terms))
    return ConvexCombination(((float(c), f),))


def merged_kinks(fs: Sequence[ConvexFunction]) -> np.ndarray:
    parts = [np.asarray(f.kinks, dtype=float) for f in fs]
    return np.unique(np.concatenate(parts)) if parts else np.empty(0)
