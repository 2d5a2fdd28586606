"""Named example sets.

The oscillating examples are built from g(x) = x^5 cos(pi/x). Sets with infinitely
many components are finite truncations that keep their limit structure in
metadata ("line_set" carries the Interval1DSet for sets on the line).
"""
from __future__ import annotations

from typing import Dict, Tuple

import numpy as np

from ..config import Config
from ..dc.builtins import constant, max5, pl, poly5cos, poly5cos_value, sq_minus_abs
from ..dc.dc_function import DCFunction1D
from ..utils.error_handler import ConfigError
from ..utils.logger import logger
from .line_sets import Interval1DSet
from .primitives import BetweenGraphs, Epigraph, Graph, HalfPlane, Hypograph, Point
from .scene import Scene

GALLERY = tuple(Config.GALLERY_DESCRIPTIONS)
ENVELOPES = ("U", "U~", "L", "L~")


def oscillation_zero_set(k_max: int = 8, window: float = 1.0) -> Interval1DSet:
    """H = {x in [-window, window] : g(x) >= 0}, components with index up to k_max, limit point 0."""
    ivs = []
    for k in range(1, k_max + 1):
        lo, hi = 1.0 / (2 * k + 0.5), 1.0 / (2 * k - 0.5)
        if lo <= window:
            ivs.append((lo, min(hi, window)))
    if window >= 2.0:
        ivs.append((2.0, window))
    for k in range(0, k_max + 1):
        lo, hi = -1.0 / (2 * k + 0.5), -1.0 / (2 * k + 1.5)
        if hi >= -window:
            ivs.append((max(lo, -window), hi))
    ivs.append((0.0, 0.0))
    return Interval1DSet(tuple(ivs), (0.0,))


def d1_counterexample(count: int = 100) -> Interval1DSet:
    return Interval1DSet.from_points([1.0 / k for k in range(1, count + 1)] + [0.0], limit_points=(0.0,))


def d1_finite() -> Interval1DSet:
    return Interval1DSet(((0.0, 1.0), (2.0, 2.0), (3.0, 4.0)))


def envelope_values(x, kind: str) -> np.ndarray:
    """Exact U, U~, L, L~ of the nowhere-dense example.

    With t = 1/x the piece index k has parity 0 (U, L) or 1 (U~, L~) and
    2k <= t <= 2k + 3; off every piece the envelope equals g.
    """
    if kind not in ENVELOPES:
        raise ConfigError(f"Unknown envelope {kind!r}; expected one of {ENVELOPES}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    parity = 1 if kind.endswith("~") else 0
    upper = kind.startswith("U")
    g = poly5cos_value(x)
    f = np.maximum(x, 0.0) ** 5
    out = g.copy()
    positive = x > 0
    t = np.where(positive, 1.0 / np.where(positive, x, 1.0), 0.0)
    k_hi = np.floor(t / 2.0)
    k = np.where(k_hi % 2 == parity, k_hi, k_hi - 1.0)
    on_piece = positive & (k >= 0) & (t <= 2.0 * k + 3.0)
    if upper:
        # U_k: f on 2k <= t <= 2k+2, g on 2k+2 <= t <= 2k+3 (k = 0: f for t <= 2)
        use_f = on_piece & (t <= 2.0 * k + 2.0)
        out = np.where(use_f, f, out)
    else:
        # L_k: g on 2k <= t <= 2k+1, -f on 2k+1 <= t <= 2k+3 (k = 0: -f for t <= 3)
        use_neg_f = on_piece & ((k == 0) | (t >= 2.0 * k + 1.0))
        out = np.where(use_neg_f, -f, out)
    return out


def envelope_function(kind: str, depth: int, nodes: int = 20001) -> DCFunction1D:
    """PL interpolant of an envelope on [-1, 1] with its breakpoints 1/j as nodes, split into DC form."""
    breaks = [1.0 / j for j in range(1, 2 * depth + 4)]
    xs = np.unique(np.concatenate([np.linspace(-1.0, 1.0, nodes), breaks]))
    f = pl(xs, envelope_values(xs, kind))
    return DCFunction1D(f.g, f.h, kind, validate=False)


def nowhere_dense(k_max: int = 6, tolerance: float = Config.GRAPH_TOL, nodes: int = 20001) -> Tuple[Scene, Dict]:
    g = poly5cos(1.0)
    plus = max5()
    prims = [Graph(plus, (-1.0, 1.0), tolerance=tolerance), Graph(plus.scale(-1.0), (-1.0, 1.0), tolerance=tolerance)]
    for k in range(1, k_max + 1):
        prims.append(Graph(g, (1.0 / (2 * k + 1), 1.0 / (2 * k)), tolerance=tolerance))
    envelopes = {kind: envelope_function(kind, k_max + 2, nodes) for kind in ENVELOPES}
    scene = Scene(tuple(prims), {"k_max": k_max, "envelopes": envelopes})
    return scene, envelopes


def gallery(name: str, k_max: int = 8, count: int = 100, tolerance: float = Config.GRAPH_TOL) -> Scene:
    if name not in GALLERY:
        raise ConfigError(f"Unknown gallery scene {name!r}; known: {', '.join(GALLERY)}")
    logger.debug(f"Building gallery scene {name}")
    if name == "osc-intersection-A":
        return Scene((HalfPlane((0.0, -1.0), 0.0),), {"reach": float("inf")})
    if name == "osc-intersection-B":
        return Scene((Hypograph(poly5cos(1.0), (-1.0, 1.0), tolerance=tolerance),))
    if name == "osc-M":
        h = oscillation_zero_set(k_max)
        zero, g = constant(0.0), poly5cos(1.0)
        prims = [Point((0.0, 0.0))]
        prims.extend(BetweenGraphs(zero, g, iv, tolerance) for iv in h.intervals if iv[0] < iv[1])
        return Scene(tuple(prims), {"k_max": k_max, "line_set": h})
    if name == "osc-K":
        # M lives over [-1, 1], so its complement keeps both strips |x| >= 1
        return Scene(
            (
                HalfPlane((0.0, 1.0), 0.0),
                Epigraph(poly5cos(1.0), (-1.0, 1.0), tolerance=tolerance),
                HalfPlane((1.0, 0.0), -1.0),
                HalfPlane((-1.0, 0.0), -1.0),
            )
        )
    if name == "nowhere-dense-A":
        return nowhere_dense(k_max, tolerance)[0]
    if name == "d1-counterexample":
        s = d1_counterexample(count)
        return Scene(s.to_scene().primitives, {"line_set": s})
    if name == "d1-finite":
        s = d1_finite()
        return Scene(s.to_scene().primitives, {"line_set": s})
    if name == "osc-zero-set":
        s = oscillation_zero_set(k_max)
        return Scene(s.to_scene().primitives, {"line_set": s, "k_max": k_max})
    return Scene((Graph(sq_minus_abs(), (-1.0, 1.0), tolerance=tolerance),), {"hypograph_reach": 0.5})
