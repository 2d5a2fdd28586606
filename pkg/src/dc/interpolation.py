"""Equidistant interpolation, slope statistics and PL splitting."""
from __future__ import annotations

import math
from typing import Callable, Tuple

import numpy as np

from ..utils.error_handler import DomainError, EvaluationError
from ..utils.logger import logger
from .convex import ConvexFunction, ConvexPL, PiecewiseLinear1D
from .dc_function import DCFunction1D

LIPSCHITZ_FLOOR = 1.0
MAX_REFINE_NODES = 2**18
PILOT_NODES = 4097


def partition(n: int, a: float = -1.0, b: float = 1.0) -> np.ndarray:
    if n < 1:
        raise DomainError(f"Partition needs n >= 1, got {n}")
    if not a < b:
        raise DomainError(f"Empty interval [{a}, {b}]")
    nodes = a + (b - a) * np.arange(n + 1) / n
    nodes[-1] = b
    return nodes


def interpolate_on_partition(phi: Callable, n: int, a: float = -1.0, b: float = 1.0) -> PiecewiseLinear1D:
    """PL interpolant of phi on the equidistant partition of [a, b] with n + 1 nodes."""
    nodes = partition(n, a, b)
    values = np.asarray(phi(nodes), dtype=float)
    bad = ~np.isfinite(values)
    if np.any(bad):
        node = float(nodes[np.argmax(bad)])
        raise EvaluationError(f"Non-finite value at partition node {node!r}", point=node)
    return PiecewiseLinear1D(nodes, values)


def slopes_and_turning(p: PiecewiseLinear1D) -> Tuple[np.ndarray, float]:
    """Slope sequence s_i and total turning sum |s_i - s_{i-1}|."""
    s = p.slopes
    return s, float(np.sum(np.abs(np.diff(s))))


def lipschitz_const(g: ConvexFunction, h: ConvexFunction, a: float = -1.0, b: float = 1.0) -> float:
    """L with g, h both (L/2)-Lipschitz on [a, b], from endpoint one-sided slopes."""
    slopes = []
    for part in (g, h):
        slopes.append(float(part.derivative(a, "+")))
        slopes.append(float(part.derivative(b, "-")))
    if not all(math.isfinite(s) for s in slopes):
        raise DomainError(f"Unbounded one-sided derivative at an endpoint of [{a}, {b}]")
    return max(2.0 * max(abs(s) for s in slopes), LIPSCHITZ_FLOOR)


def canonical_pl_split(p: PiecewiseLinear1D) -> Tuple[ConvexPL, ConvexPL]:
    """Convex PL (u, v) with p = u - v: u collects the upward slope jumps, v the downward ones."""
    s = p.slopes
    jumps = np.diff(s)
    y0, s0 = float(p.ys[0]), float(s[0])
    u = _accumulate(p.xs, max(y0, 0.0), min(s0, 0.0), np.maximum(jumps, 0.0))
    v = _accumulate(p.xs, max(-y0, 0.0), -max(s0, 0.0), np.maximum(-jumps, 0.0))
    return ConvexPL(p.xs, u), ConvexPL(p.xs, v)


def _accumulate(xs: np.ndarray, start: float, start_slope: float, jumps: np.ndarray) -> np.ndarray:
    # each part carries only its own rounding, so its convexity check holds at its own scale
    slopes = start_slope + np.concatenate([[0.0], np.cumsum(jumps)])
    return start + np.concatenate([[0.0], np.cumsum(slopes * np.diff(xs))])


def refine_to_tolerance(
    f: DCFunction1D, a: float, b: float, tol: float, max_nodes: int = MAX_REFINE_NODES
) -> PiecewiseLinear1D:
    """PL interpolant of f on [a, b] whose interpolation error is below tol.

    PL inputs are reproduced exactly on their own breakpoints. Otherwise the node
    spacing comes from a second-difference curvature estimate (error <= h^2 B / 8),
    with the kinks of the convex components inserted as nodes.
    """
    if not a < b:
        raise DomainError(f"Empty interval [{a}, {b}]")
    kinks = np.asarray(f.kinks, dtype=float)
    kinks = kinks[(kinks > a) & (kinks < b)]
    if f.is_piecewise_linear:
        nodes = np.unique(np.concatenate([[a, b], kinks]))
        return PiecewiseLinear1D(nodes, f(nodes))
    pilot = np.unique(np.concatenate([np.linspace(a, b, PILOT_NODES), kinks]))
    values = np.asarray(f(pilot), dtype=float)
    if not np.all(np.isfinite(values)):
        raise EvaluationError(f"Non-finite value while refining {f.name}")
    dx = np.diff(pilot)
    first = np.diff(values) / dx
    second = 2.0 * np.diff(first) / (dx[:-1] + dx[1:])
    smooth = ~np.isin(pilot[1:-1], kinks)
    bound = 2.0 * float(np.max(np.abs(second[smooth]), initial=0.0))
    if bound == 0.0:
        count = 1
    else:
        count = int(math.ceil((b - a) / math.sqrt(8.0 * tol / bound)))
    if count > max_nodes:
        logger.warning(f"Refinement of {f.name} capped at {max_nodes} nodes (requested {count})")
        count = max_nodes
    logger.debug(f"Refining {f.name} on [{a}, {b}] with {count} segments (curvature bound {bound:.3g})")
    nodes = np.unique(np.concatenate([partition(count, a, b), kinks]))
    return PiecewiseLinear1D(nodes, f(nodes))
