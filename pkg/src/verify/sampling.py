"""Seeded low-discrepancy sampling over planar regions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import qmc

from ..utils.error_handler import DomainError
from ..utils.logger import logger


def unit_samples(count: int, dim: int, seed: int) -> np.ndarray:
    """`count` scrambled Sobol points in [0, 1)^dim (drawn as a power of two, then cut)."""
    if count < 1:
        raise DomainError(f"Sample count must be positive, got {count}")
    sampler = qmc.Sobol(d=dim, scramble=True, seed=seed)
    return sampler.random_base2(m=max(0, math.ceil(math.log2(count))))[:count]


@dataclass(frozen=True)
class DiskRegion:
    center: tuple
    radius: float

    def from_unit(self, u: np.ndarray) -> np.ndarray:
        r = self.radius * np.sqrt(u[:, 0])
        t = 2.0 * math.pi * u[:, 1]
        return np.column_stack([self.center[0] + r * np.cos(t), self.center[1] + r * np.sin(t)])

    def contains(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.hypot(p[:, 0] - self.center[0], p[:, 1] - self.center[1]) <= self.radius


@dataclass(frozen=True)
class BoxRegion:
    x0: float
    x1: float
    y0: float
    y1: float

    def from_unit(self, u: np.ndarray) -> np.ndarray:
        return np.column_stack([self.x0 + (self.x1 - self.x0) * u[:, 0], self.y0 + (self.y1 - self.y0) * u[:, 1]])

    def contains(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=float).reshape(-1, 2)
        return (p[:, 0] >= self.x0) & (p[:, 0] <= self.x1) & (p[:, 1] >= self.y0) & (p[:, 1] <= self.y1)


def sample_points(region, count: int, seed: int, anchors: Optional[np.ndarray] = None) -> np.ndarray:
    points = region.from_unit(unit_samples(count, 2, seed))
    return _with_anchors(points, region, anchors)


def sample_pairs(region, count: int, seed: int):
    u = unit_samples(count, 4, seed)
    return region.from_unit(u[:, :2]), region.from_unit(u[:, 2:])


def sample_triples(region, count: int, seed: int):
    """(z1, z2, t) with t in (0, 1) for midpoint-type tests."""
    u = unit_samples(count, 5, seed)
    t = np.clip(u[:, 4], 1e-6, 1.0 - 1e-6)
    return region.from_unit(u[:, :2]), region.from_unit(u[:, 2:4]), t


def unit_directions(count: int, seed: int) -> np.ndarray:
    t = 2.0 * math.pi * unit_samples(count, 1, seed)[:, 0]
    return np.column_stack([np.cos(t), np.sin(t)])


def _with_anchors(points, region, anchors):
    if anchors is None or len(anchors) == 0:
        return points
    anchors = np.asarray(anchors, dtype=float).reshape(-1, 2)
    keep = region.contains(anchors)
    if not np.all(keep):
        logger.debug(f"Dropped {int(np.sum(~keep))} anchor samples outside the region")
    return np.vstack([points, anchors[keep]])


def grid(bounds, resolution: int) -> np.ndarray:
    """Row-major (y outer, x inner) regular grid over (x0, x1, y0, y1)."""
    if resolution < 2:
        raise DomainError(f"Grid resolution must be at least 2, got {resolution}")
    x0, x1, y0, y1 = map(float, bounds)
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    gx, gy = np.meshgrid(xs, ys)
    return np.column_stack([gx.ravel(), gy.ravel()])
