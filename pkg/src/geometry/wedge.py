"""Normal wedges at polyline vertices and vertex-angle bookkeeping."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np

from ..dc.convex import PiecewiseLinear1D
from ..utils.error_handler import DomainError
from .polyline import Polyline, as_point, as_points

UNIT_TOL = 1e-12
MEMBERSHIP_SLACK = 1e-12
COLLINEAR_SLOPE_TOL = 1e-14


def _rotate(v: np.ndarray, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


@dataclass(frozen=True, eq=False)
class Wedge:
    """Closed angle {z : angle(z - vertex, bisector) <= half_angle}."""

    vertex: np.ndarray
    bisector: np.ndarray
    half_angle: float

    def __post_init__(self):
        vertex = as_point(self.vertex).copy()
        bisector = as_point(self.bisector).copy()
        if abs(float(np.hypot(*bisector)) - 1.0) > UNIT_TOL:
            raise DomainError(f"Wedge bisector {bisector.tolist()} is not a unit vector")
        if not 0.0 < self.half_angle < math.pi / 2:
            raise DomainError(f"Wedge half-angle {self.half_angle!r} outside (0, pi/2)")
        vertex.setflags(write=False)
        bisector.setflags(write=False)
        object.__setattr__(self, "vertex", vertex)
        object.__setattr__(self, "bisector", bisector)
        object.__setattr__(self, "half_angle", float(self.half_angle))

    @property
    def angle(self) -> float:
        return 2.0 * self.half_angle

    @property
    def edge_directions(self) -> Tuple[np.ndarray, np.ndarray]:
        """Unit directions of the two polyline edges leaving the vertex."""
        back = -self.bisector
        turn = math.pi / 2 - self.half_angle
        return _rotate(back, turn), _rotate(back, -turn)

    def local_coordinates(self, points) -> Tuple[np.ndarray, np.ndarray]:
        """(x, y) with the vertex at the origin and the bisector as first axis."""
        p = as_points(points) - self.vertex
        u = self.bisector
        x = p[:, 0] * u[0] + p[:, 1] * u[1]
        y = -p[:, 0] * u[1] + p[:, 1] * u[0]
        return x, y

    def contains(self, points) -> np.ndarray:
        p = as_points(points) - self.vertex
        norms = np.hypot(p[:, 0], p[:, 1])
        inside = np.ones(p.shape[0], dtype=bool)
        for e in self.edge_directions:
            inside &= p[:, 0] * e[0] + p[:, 1] * e[1] <= MEMBERSHIP_SLACK * norms
        return inside


def vertex_angles(p: Union[Polyline, PiecewiseLinear1D]) -> Tuple[np.ndarray, np.ndarray, float]:
    """beta_i = arctan s_i, alpha_i = |beta_i - beta_{i-1}| and their sum."""
    if isinstance(p, PiecewiseLinear1D):
        slopes = p.slopes
    else:
        if not p.is_graph:
            raise DomainError("Vertex angles need a graph polyline (strictly increasing abscissae)")
        slopes = p.slopes
    betas = np.arctan(slopes)
    alphas = np.abs(np.diff(betas))
    return betas, alphas, float(np.sum(alphas))


def wedge_at_vertex(z_prev, z_mid, z_next) -> Optional[Wedge]:
    z_prev, z_mid, z_next = as_point(z_prev), as_point(z_mid), as_point(z_next)
    a, b = z_next - z_mid, z_prev - z_mid
    na, nb = float(np.hypot(*a)), float(np.hypot(*b))
    if na == 0.0 or nb == 0.0:
        raise DomainError("Wedge vertices must be distinct")
    return _wedge_from_edges(z_mid, a / na, b / nb)


def wedge_from_slopes(vertex, s_prev: float, s_next: float) -> Optional[Wedge]:
    """Wedge at a graph vertex with incoming slope s_prev and outgoing slope s_next."""
    if abs(s_next - s_prev) <= COLLINEAR_SLOPE_TOL:
        return None
    forward = np.array([1.0, s_next]) / math.hypot(1.0, s_next)
    backward = np.array([-1.0, -s_prev]) / math.hypot(1.0, s_prev)
    return _wedge_from_edges(as_point(vertex), forward, backward, force=True)


def _wedge_from_edges(vertex, forward, backward, force=False) -> Optional[Wedge]:
    total = forward + backward
    spread = forward - backward
    width = float(np.hypot(*total))
    if width <= COLLINEAR_SLOPE_TOL and not force:
        return None
    if width == 0.0:
        return None
    beta = math.atan2(width, float(np.hypot(*spread)))
    if beta >= math.pi / 2:
        raise DomainError("Polyline folds back on itself; the normal wedge is degenerate")
    return Wedge(vertex, -total / width, beta)
