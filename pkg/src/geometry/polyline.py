"""Distances and metric projections onto segments, lines and polylines."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from ..dc.convex import PiecewiseLinear1D
from ..utils.error_handler import DomainError

DEDUP_TOL = 1e-10
TIE_TOL = 1e-12
CHUNK_ENTRIES = 1_000_000


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    distance: float
    projections: np.ndarray
    segments: Tuple[int, ...] = field(default=())

    @property
    def nearest(self) -> np.ndarray:
        return self.projections[0]


def as_point(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.shape != (2,):
        raise DomainError(f"Expected a planar point, got shape {z.shape}")
    return z


def as_points(points) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points.reshape(1, 2)
    if points.ndim != 2 or points.shape[1] != 2:
        raise DomainError(f"Expected an (m, 2) point array, got shape {points.shape}")
    return points


def _segment_sq_distances(points: np.ndarray, starts: np.ndarray, ends: np.ndarray):
    """Squared distances and clamped parameters for every (point, segment) pair."""
    dx = ends[:, 0] - starts[:, 0]
    dy = ends[:, 1] - starts[:, 1]
    length2 = dx * dx + dy * dy
    safe = np.where(length2 > 0.0, length2, 1.0)
    px = points[:, 0:1] - starts[None, :, 0]
    py = points[:, 1:2] - starts[None, :, 1]
    t = np.where(length2 > 0.0, (px * dx + py * dy) / safe, 0.0)
    t = np.clip(t, 0.0, 1.0)
    ex = px - t * dx
    ey = py - t * dy
    return ex * ex + ey * ey, t


def segment_distance(z, a, b) -> ProjectionResult:
    """Distance to the closed segment [a, b]; a == b degrades to a point distance."""
    z, a, b = as_point(z), as_point(a), as_point(b)
    sq, t = _segment_sq_distances(z[None, :], a[None, :], b[None, :])
    q = a + t[0, 0] * (b - a)
    return ProjectionResult(float(np.sqrt(sq[0, 0])), q[None, :], (0,))


def line_distance(z, a, b) -> float:
    z, a, b = as_point(z), as_point(a), as_point(b)
    d = b - a
    norm = float(np.hypot(d[0], d[1]))
    if norm == 0.0:
        raise DomainError(f"Degenerate line through coincident points {a.tolist()}")
    return abs(d[0] * (z[1] - a[1]) - d[1] * (z[0] - a[0])) / norm


@dataclass(frozen=True, eq=False)
class Polyline:
    """Vertices z_0 ... z_n, consecutive vertices distinct."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or v.shape[0] < 2:
            raise DomainError("A polyline needs at least two planar vertices")
        steps = np.diff(v, axis=0)
        if np.any(np.all(steps == 0.0, axis=1)):
            raise DomainError("Consecutive polyline vertices must be distinct")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_graph(cls, p: PiecewiseLinear1D) -> "Polyline":
        return cls(p.vertices())

    @property
    def segments(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def starts(self) -> np.ndarray:
        return self.vertices[:-1]

    @property
    def ends(self) -> np.ndarray:
        return self.vertices[1:]

    @property
    def is_graph(self) -> bool:
        return bool(np.all(np.diff(self.vertices[:, 0]) > 0))

    @property
    def slopes(self) -> np.ndarray:
        if not self.is_graph:
            raise DomainError("Slopes are only defined for graph polylines")
        d = np.diff(self.vertices, axis=0)
        return d[:, 1] / d[:, 0]

    @property
    def normals(self) -> np.ndarray:
        """Unit normals n_i = rot90(z_{i+1} - z_i) / |z_{i+1} - z_i|."""
        d = np.diff(self.vertices, axis=0)
        lengths = np.hypot(d[:, 0], d[:, 1])
        return np.column_stack([-d[:, 1], d[:, 0]]) / lengths[:, None]

    def distances(self, points) -> np.ndarray:
        """Vectorised distance for an (m, 2) array, chunked over points."""
        points = as_points(points)
        out = np.empty(points.shape[0])
        step = max(1, CHUNK_ENTRIES // self.segments)
        for lo in range(0, points.shape[0], step):
            sq, _ = _segment_sq_distances(points[lo : lo + step], self.starts, self.ends)
            out[lo : lo + step] = np.sqrt(np.min(sq, axis=1))
        return out

    def project(self, z) -> ProjectionResult:
        return polyline_distance(z, self)


def polyline_distance(z, polyline: Polyline) -> ProjectionResult:
    """Distance and the full set of nearest points, deduplicated at 1e-10."""
    z = as_point(z)
    sq, t = _segment_sq_distances(z[None, :], polyline.starts, polyline.ends)
    dist = np.sqrt(sq[0])
    best = float(np.min(dist))
    tied = np.flatnonzero(dist <= best + TIE_TOL * max(1.0, best))
    points, owners = [], []
    for i in tied:
        q = polyline.starts[i] + t[0, i] * (polyline.ends[i] - polyline.starts[i])
        if all(np.hypot(*(q - p)) > DEDUP_TOL for p in points):
            points.append(q)
            owners.append(int(i))
    return ProjectionResult(best, np.array(points), tuple(owners))
