"""Closed planar primitives with exact or refinement-bounded distance.

Every primitive evaluates `distances` on an (m, 2) array and `project` on a single
point. Graph-based primitives refine their DC function into a polyline whose
interpolation error stays below the requested tolerance.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..config import Config
from ..dc.convex import ConvexCombination
from ..dc.dc_function import DCFunction1D
from ..dc.interpolation import refine_to_tolerance
from ..geometry.isometry import PlanarIsometry
from ..geometry.polyline import Polyline, ProjectionResult, as_point, as_points, polyline_distance
from ..utils.error_handler import DomainError

PARTS = ("solid", "boundary", "exterior")


def _unit(v) -> np.ndarray:
    v = as_point(v)
    norm = float(np.hypot(*v))
    if norm == 0.0:
        raise DomainError("Direction vector must be nonzero")
    return v / norm


def _is_empty_combination(part) -> bool:
    return isinstance(part, ConvexCombination) and not part.terms


class Primitive(ABC):
    reach_override: Optional[float] = None

    @abstractmethod
    def distances(self, points) -> np.ndarray: ...

    @abstractmethod
    def project(self, z) -> ProjectionResult: ...

    def distance(self, z) -> float:
        return float(self.distances(as_point(z)[None, :])[0])

    @property
    def default_reach(self) -> Optional[float]:
        return None

    @property
    def reach(self) -> Optional[float]:
        if self.reach_override is not None:
            return self.reach_override
        return self.default_reach


def _single(z, q) -> ProjectionResult:
    z, q = as_point(z), as_point(q)
    return ProjectionResult(float(np.hypot(*(z - q))), q[None, :])


@dataclass(frozen=True, eq=False)
class Point(Primitive):
    at: Tuple[float, float]
    reach_override: Optional[float] = None

    def distances(self, points):
        p = as_points(points)
        return np.hypot(p[:, 0] - self.at[0], p[:, 1] - self.at[1])

    def project(self, z):
        return _single(z, self.at)

    @property
    def default_reach(self):
        return math.inf


@dataclass(frozen=True, eq=False)
class Segment(Primitive):
    a: Tuple[float, float]
    b: Tuple[float, float]
    reach_override: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "_line", Polyline(np.array([self.a, self.b], dtype=float)))

    @property
    def polyline(self) -> Polyline:
        return self._line

    def distances(self, points):
        return self._line.distances(points)

    def project(self, z):
        return polyline_distance(z, self._line)

    @property
    def default_reach(self):
        return math.inf


@dataclass(frozen=True, eq=False)
class Ray(Primitive):
    """Closed half-line {origin + t direction : t >= 0}."""

    origin: Tuple[float, float]
    direction: Tuple[float, float]
    reach_override: Optional[float] = None

    def _parameters(self, p):
        u = _unit(self.direction)
        o = as_point(self.origin)
        t = np.maximum((p[:, 0] - o[0]) * u[0] + (p[:, 1] - o[1]) * u[1], 0.0)
        return o, u, t

    def distances(self, points):
        p = as_points(points)
        o, u, t = self._parameters(p)
        return np.hypot(p[:, 0] - o[0] - t * u[0], p[:, 1] - o[1] - t * u[1])

    def project(self, z):
        o, u, t = self._parameters(as_points(z))
        return _single(z, o + t[0] * u)

    @property
    def default_reach(self):
        return math.inf


@dataclass(frozen=True, eq=False)
class HalfPlane(Primitive):
    """{z : <normal, z> <= offset} (solid) or its boundary line."""

    normal: Tuple[float, float]
    offset: float
    part: str = "solid"
    reach_override: Optional[float] = None

    def __post_init__(self):
        if self.part not in ("solid", "boundary"):
            raise DomainError(f"Half-plane part must be 'solid' or 'boundary', got {self.part!r}")
        norm = float(np.hypot(*self.normal))
        if norm == 0.0:
            raise DomainError("Half-plane normal must be nonzero")
        object.__setattr__(self, "_n", np.asarray(self.normal, dtype=float) / norm)
        object.__setattr__(self, "_c", float(self.offset) / norm)

    def signed(self, points) -> np.ndarray:
        p = as_points(points)
        return p[:, 0] * self._n[0] + p[:, 1] * self._n[1] - self._c

    def contains(self, points) -> np.ndarray:
        s = self.signed(points)
        return s <= 0.0 if self.part == "solid" else s == 0.0

    def distances(self, points):
        s = self.signed(points)
        return np.maximum(s, 0.0) if self.part == "solid" else np.abs(s)

    def project(self, z):
        z = as_point(z)
        s = float(self.signed(z)[0])
        if self.part == "solid":
            s = max(s, 0.0)
        return _single(z, z - s * self._n)

    @property
    def default_reach(self):
        return math.inf


@dataclass(frozen=True, eq=False)
class Disk(Primitive):
    """Closed disk (solid), its circle (boundary) or the closed exterior."""

    center: Tuple[float, float]
    radius: float
    part: str = "solid"
    reach_override: Optional[float] = None

    def __post_init__(self):
        if self.part not in PARTS:
            raise DomainError(f"Disk part must be one of {PARTS}, got {self.part!r}")
        if not self.radius > 0:
            raise DomainError(f"Disk radius must be positive, got {self.radius}")

    def _radial(self, points):
        p = as_points(points)
        return np.hypot(p[:, 0] - self.center[0], p[:, 1] - self.center[1])

    def contains(self, points) -> np.ndarray:
        r = self._radial(points)
        if self.part == "solid":
            return r <= self.radius
        if self.part == "exterior":
            return r >= self.radius
        return r == self.radius

    def distances(self, points):
        r = self._radial(points)
        if self.part == "solid":
            return np.maximum(r - self.radius, 0.0)
        if self.part == "exterior":
            return np.maximum(self.radius - r, 0.0)
        return np.abs(r - self.radius)

    def project(self, z):
        z = as_point(z)
        c = as_point(self.center)
        r = float(np.hypot(*(z - c)))
        if self.part == "solid" and r <= self.radius or self.part == "exterior" and r >= self.radius:
            return _single(z, z)
        if r == 0.0:
            # every circle point is nearest; report one
            return _single(z, c + np.array([self.radius, 0.0]))
        return _single(z, c + self.radius * (z - c) / r)

    @property
    def default_reach(self):
        return math.inf if self.part == "solid" else float(self.radius)


@dataclass(frozen=True, eq=False)
class Graph(Primitive):
    """isometry(graph f|[a, b]), refined to a polyline within `tolerance`."""

    f: DCFunction1D
    interval: Tuple[float, float]
    isometry: PlanarIsometry = field(default_factory=PlanarIsometry)
    tolerance: float = Config.GRAPH_TOL
    reach_override: Optional[float] = None

    def __post_init__(self):
        a, b = map(float, self.interval)
        if a > b:
            raise DomainError(f"Graph interval [{a}, {b}] is empty")
        if a == b:
            vertices = np.array([[a, self.f(a)]])
            object.__setattr__(self, "_pl", None)
        else:
            pl = refine_to_tolerance(self.f, a, b, self.tolerance)
            vertices = pl.vertices()
            object.__setattr__(self, "_pl", pl)
        mapped = self.isometry.apply(vertices)
        object.__setattr__(self, "_vertices", mapped)
        object.__setattr__(self, "_line", Polyline(mapped) if mapped.shape[0] > 1 else None)

    @property
    def vertices(self) -> np.ndarray:
        return self._vertices

    @property
    def polyline(self) -> Optional[Polyline]:
        return self._line

    @property
    def exact(self) -> bool:
        """True when the polyline is the graph itself (PL function)."""
        return self.f.is_piecewise_linear

    def local_values(self, xs) -> np.ndarray:
        """Refined f at local abscissae (clamped to the interval)."""
        if self._pl is None:
            return np.full(np.shape(xs), float(self._vertices[0, 1]))
        return np.interp(xs, self._pl.xs, self._pl.ys)

    def distances(self, points):
        if self._line is None:
            p = as_points(points)
            return np.hypot(p[:, 0] - self._vertices[0, 0], p[:, 1] - self._vertices[0, 1])
        return self._line.distances(points)

    def project(self, z):
        if self._line is None:
            return _single(z, self._vertices[0])
        return polyline_distance(z, self._line)


@dataclass(frozen=True, eq=False)
class Epigraph(Primitive):
    """{(x, y) : a <= x <= b, y >= f(x)}; `direction=-1` gives the hypograph."""

    f: DCFunction1D
    interval: Tuple[float, float]
    direction: int = 1
    tolerance: float = Config.GRAPH_TOL
    reach_override: Optional[float] = None

    def __post_init__(self):
        if self.direction not in (1, -1):
            raise DomainError("Epigraph direction must be +1 (epigraph) or -1 (hypograph)")
        a, b = map(float, self.interval)
        if not a < b:
            raise DomainError(f"Epigraph interval [{a}, {b}] must be nondegenerate")
        graph = Graph(self.f, (a, b), tolerance=self.tolerance)
        up = (0.0, float(self.direction))
        rays = (
            Ray((a, float(self.f(a))), up),
            Ray((b, float(self.f(b))), up),
        )
        object.__setattr__(self, "_graph", graph)
        object.__setattr__(self, "_rays", rays)

    @property
    def boundary(self) -> Tuple[Primitive, ...]:
        return (self._graph,) + self._rays

    def contains(self, points) -> np.ndarray:
        p = as_points(points)
        a, b = self.interval
        inside = (p[:, 0] >= a) & (p[:, 0] <= b)
        gap = self.direction * (p[:, 1] - self._graph.local_values(p[:, 0]))
        return inside & (gap >= 0.0)

    def distances(self, points):
        p = as_points(points)
        d = np.min(np.vstack([part.distances(p) for part in self.boundary]), axis=0)
        return np.where(self.contains(p), 0.0, d)

    def project(self, z):
        z = as_point(z)
        if self.contains(z)[0]:
            return _single(z, z)
        return _nearest_of(z, self.boundary)

    @property
    def default_reach(self):
        convex_side = self.f.h if self.direction == 1 else self.f.g
        return math.inf if _is_empty_combination(convex_side) else None


@dataclass(frozen=True, eq=False)
class Hypograph(Epigraph):
    direction: int = -1


@dataclass(frozen=True, eq=False)
class BetweenGraphs(Primitive):
    """{(x, y) : a <= x <= b, lower(x) <= y <= upper(x)}, lower <= upper on [a, b]."""

    lower: DCFunction1D
    upper: DCFunction1D
    interval: Tuple[float, float]
    tolerance: float = Config.GRAPH_TOL
    reach_override: Optional[float] = None

    def __post_init__(self):
        a, b = map(float, self.interval)
        if a > b:
            raise DomainError(f"Interval [{a}, {b}] is empty")
        low = Graph(self.lower, (a, b), tolerance=self.tolerance)
        high = Graph(self.upper, (a, b), tolerance=self.tolerance)
        parts = [low, high]
        if a < b:
            for x in (a, b):
                y0, y1 = float(self.lower(x)), float(self.upper(x))
                parts.append(Segment((x, y0), (x, y1)) if y1 > y0 else Point((x, y0)))
        object.__setattr__(self, "_low", low)
        object.__setattr__(self, "_high", high)
        object.__setattr__(self, "_parts", tuple(parts))

    @property
    def boundary(self) -> Tuple[Primitive, ...]:
        return self._parts

    def contains(self, points) -> np.ndarray:
        p = as_points(points)
        a, b = self.interval
        inside = (p[:, 0] >= a) & (p[:, 0] <= b)
        lo = self._low.local_values(p[:, 0])
        hi = self._high.local_values(p[:, 0])
        return inside & (p[:, 1] >= lo) & (p[:, 1] <= hi)

    def distances(self, points):
        p = as_points(points)
        d = np.min(np.vstack([part.distances(p) for part in self._parts]), axis=0)
        return np.where(self.contains(p), 0.0, d)

    def project(self, z):
        z = as_point(z)
        if self.contains(z)[0]:
            return _single(z, z)
        return _nearest_of(z, self._parts)


@dataclass(frozen=True, eq=False)
class Tube(Primitive):
    """Sublevel tube {z : dist(z, base) <= radius} around a primitive or scene.

    This is the filled parallel set, so its distance is max(d_base - radius, 0) and
    vanishes inside. The level set {d_base = radius} is only its boundary.
    """

    base: object
    radius: float
    reach_override: Optional[float] = None

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"Tube radius must be positive, got {self.radius}")

    def distances(self, points):
        return np.maximum(self.base.distances(points) - self.radius, 0.0)

    def project(self, z):
        z = as_point(z)
        inner = self.base.project(z)
        if inner.distance <= self.radius:
            return _single(z, z)
        q = inner.nearest
        return _single(z, q + self.radius * (z - q) / inner.distance)


def _nearest_of(z, parts) -> ProjectionResult:
    results = [part.project(z) for part in parts]
    return merge_projections(results)


def merge_projections(results) -> ProjectionResult:
    """Union rule: keep the smallest distance and every nearest point attaining it."""
    best = min(r.distance for r in results)
    tie = 1e-12 * max(1.0, best)
    points = []
    for r in results:
        if r.distance <= best + tie:
            for q in r.projections:
                if all(np.hypot(*(q - p)) > 1e-10 for p in points):
                    points.append(q)
    return ProjectionResult(best, np.array(points))
