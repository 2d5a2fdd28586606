"""Finite-resolution DC certificates for the distance to a DC graph.

For f = g - h on [-1, 1] and resolution n the certificate holds the interpolants
g_n, h_n, f_n = g_n - h_n on the equidistant partition, the polyline P = graph f_n,
one wedge compensator psi_i per vertex where the slope turns, and the evaluators

    eta_n = sum_i psi_i
    xi_n(x, y) = -max(2 g_n(x) - y, 2 h_n(x) + y)
    c_n = eta_n + xi_n          (concave, Lipschitz with constant L* = M + 2L + 1)
    c*_n = d_n + c_n            (concave on U = U((0, f(0)), 1/10))

with d_n = dist(., P). The cover family consists of the concave functions
nu_i = A_i + eta_n - psi_i + xi_n (one per wedge) and mu_j^+- = +-<z - z_j, n_j> + eta_n + xi_n
(two per segment); every point of U has a cover function agreeing with c*_n.

All evaluators accept a single point (returning a float) or an (m, 2) array.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Tuple

import numpy as np

from ..config import Config
from ..dc.convex import ConvexPL, PiecewiseLinear1D
from ..dc.dc_function import DCFunction1D
from ..dc.interpolation import interpolate_on_partition, lipschitz_const
from ..geometry.polyline import Polyline, as_points, polyline_distance
from ..geometry.wedge import wedge_from_slopes
from ..utils.error_handler import (
    CoverViolationError,
    DomainError,
    InternalConsistencyError,
    ResolutionTooCoarseError,
)
from ..utils.logger import logger
from .kofu import KofuPair

COVER_TOL = 1e-9
VERTEX_TOL = 1e-12


def budget_bound(lipschitz: float) -> float:
    """M = 2 sqrt(2) L^2 / arctan L."""
    return 2.0 * math.sqrt(2.0) * lipschitz**2 / math.atan(lipschitz)


def _pointwise(fn):
    """Let a batch evaluator take a single point and return a float."""

    def wrapper(self, points):
        single = np.ndim(points) == 1
        values = fn(self, as_points(points))
        return float(values[0]) if single else values

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _one_sided(p: PiecewiseLinear1D, x: float, dx: float) -> float:
    """Directional derivative p'(x; dx) of a PL function."""
    if dx == 0.0:
        return 0.0
    if dx > 0:
        return dx * float(p.derivative(x, "+"))
    return dx * float(p.derivative(x, "-"))


def _ray_distance(v: np.ndarray, ray: np.ndarray) -> float:
    along = float(v @ ray)
    if along <= 0.0:
        return float(np.hypot(*v))
    return float(np.hypot(*(v - along * ray)))


@dataclass(frozen=True)
class CoverFunction:
    kind: str  # "nu", "mu+" or "mu-"
    index: int  # wedge vertex for nu, segment for mu
    evaluate: Callable

    def __call__(self, points):
        return self.evaluate(points)


@dataclass(frozen=True, eq=False)
class DCCertificate:
    f: DCFunction1D
    n: int
    L: float
    M: float
    L_star: float
    center: Tuple[float, float]
    radius: float
    g_n: ConvexPL
    h_n: ConvexPL
    f_n: PiecewiseLinear1D
    polyline: Polyline
    wedge_vertices: Tuple[int, ...]
    compensators: Tuple[KofuPair, ...]

    @property
    def window(self) -> Tuple[float, float]:
        return self.f_n.domain

    @property
    def lipschitz_budget(self) -> float:
        """Sum of the compensator Lipschitz constants, at most M."""
        return float(sum(k.lipschitz for k in self.compensators))

    def contains(self, points, slack: float = 1e-12) -> np.ndarray:
        p = as_points(points)
        return np.hypot(p[:, 0] - self.center[0], p[:, 1] - self.center[1]) <= self.radius + slack

    def psi_matrix(self, points) -> np.ndarray:
        p = as_points(points)
        if not self.compensators:
            return np.zeros((p.shape[0], 0))
        return np.column_stack([k.psi(p) for k in self.compensators])

    @_pointwise
    def d_n(self, points):
        return self.polyline.distances(points)

    @_pointwise
    def eta(self, points):
        return np.sum(self.psi_matrix(points), axis=1)

    @_pointwise
    def xi(self, points):
        x, y = points[:, 0], points[:, 1]
        return -np.maximum(2.0 * self.g_n(x) - y, 2.0 * self.h_n(x) + y)

    @_pointwise
    def p_n(self, points):
        return np.abs(self.f_n(points[:, 0]) - points[:, 1])

    @_pointwise
    def c_n(self, points):
        return self.eta(points) + self.xi(points)

    @_pointwise
    def c_star(self, points):
        return self.d_n(points) + self.c_n(points)

    def components(self, points) -> Dict[str, np.ndarray]:
        """d_n, eta_n, xi_n, c_n and c*_n from one pass over the wedges."""
        p = as_points(points)
        psi = self.psi_matrix(p)
        d = self.d_n(p)
        eta = np.sum(psi, axis=1)
        xi = self.xi(p)
        c = eta + xi
        return {"d_n": d, "eta": eta, "xi": xi, "c_n": c, "c_star": d + c, "psi": psi}

    # cover family

    @cached_property
    def cover(self) -> Tuple[CoverFunction, ...]:
        funcs: List[CoverFunction] = []
        for k, vertex in enumerate(self.wedge_vertices):
            funcs.append(CoverFunction("nu", vertex, self._column(k)))
        offset = len(self.wedge_vertices)
        for j in range(self.polyline.segments):
            funcs.append(CoverFunction("mu+", j, self._column(offset + 2 * j)))
            funcs.append(CoverFunction("mu-", j, self._column(offset + 2 * j + 1)))
        return tuple(funcs)

    def _column(self, k: int) -> Callable:
        def evaluate(points):
            values = self.cover_values(points)[:, k]
            return float(values[0]) if np.ndim(points) == 1 else values

        return evaluate

    def cover_values(self, points) -> np.ndarray:
        """(m, C) matrix of all cover functions, nu's first, then mu+_j, mu-_j."""
        p = as_points(points)
        parts = self.components(p)
        base = parts["eta"] + parts["xi"]
        columns = []
        for k, (vertex, pair) in enumerate(zip(self.wedge_vertices, self.compensators)):
            columns.append(pair.affine(p) + base - parts["psi"][:, k])
        starts = self.polyline.starts
        normals = self.polyline.normals
        offsets = (p[:, 0:1] - starts[None, :, 0]) * normals[None, :, 0] + (
            p[:, 1:2] - starts[None, :, 1]
        ) * normals[None, :, 1]
        mu = np.empty((p.shape[0], 2 * self.polyline.segments))
        mu[:, 0::2] = offsets + base[:, None]
        mu[:, 1::2] = -offsets + base[:, None]
        if columns:
            return np.column_stack(columns + [mu])
        return mu

    def nu_index(self, vertex: int):
        try:
            return self.wedge_vertices.index(vertex)
        except ValueError:
            return None

    def mu_index(self, segment: int, positive: bool) -> int:
        return len(self.wedge_vertices) + 2 * segment + (0 if positive else 1)

    # exact one-sided directional derivatives at graph points (x, f_n(x))

    def d_n_dir(self, x: float, v) -> float:
        """dist(v, tangent cone of graph f_n at (x, f_n(x)))."""
        v = np.asarray(v, dtype=float)
        right = float(self.f_n.derivative(x, "+"))
        left = float(self.f_n.derivative(x, "-"))
        forward = np.array([1.0, right]) / math.hypot(1.0, right)
        backward = np.array([-1.0, -left]) / math.hypot(1.0, left)
        return min(_ray_distance(v, forward), _ray_distance(v, backward))

    def p_n_dir(self, x: float, v) -> float:
        return abs(_one_sided(self.f_n, x, float(v[0])) - float(v[1]))

    def xi_dir(self, x: float, v) -> float:
        vx, vy = float(v[0]), float(v[1])
        return -max(2.0 * _one_sided(self.g_n, x, vx) - vy, 2.0 * _one_sided(self.h_n, x, vx) + vy)

    def compensation_sums(self, x: float, v) -> Dict[str, float]:
        """Symmetric one-sided sums of p_n, d_n and d_n + xi_n at a graph point."""
        v = np.asarray(v, dtype=float)
        w = -v
        return {
            "p_n": self.p_n_dir(x, v) + self.p_n_dir(x, w),
            "d_n": self.d_n_dir(x, v) + self.d_n_dir(x, w),
            "d_n+xi_n": self.d_n_dir(x, v) + self.xi_dir(x, v) + self.d_n_dir(x, w) + self.xi_dir(x, w),
        }

    def manifest(self) -> dict:
        return {
            "function": self.f.name,
            "n": self.n,
            "L": self.L,
            "M": self.M,
            "L_star": self.L_star,
            "center": list(self.center),
            "radius": self.radius,
            "window": list(self.window),
            "wedges": len(self.compensators),
            "lipschitz_budget": self.lipschitz_budget,
        }


def build_certificate(
    f: DCFunction1D,
    n: int,
    radius: float = Config.CERTIFICATE_RADIUS,
    window: Tuple[float, float] = Config.CERTIFICATE_WINDOW,
    method: str = "support",
) -> DCCertificate:
    a, b = window
    if not a < 0.0 < b:
        raise DomainError(f"Certificate window [{a}, {b}] must contain 0 in its interior")
    if n < Config.MIN_RESOLUTION:
        raise ResolutionTooCoarseError(
            f"Resolution n={n} is below {Config.MIN_RESOLUTION}", inequality=f"n >= {Config.MIN_RESOLUTION}"
        )
    g_n = interpolate_on_partition(f.g, n, a, b).as_convex()
    h_n = interpolate_on_partition(f.h, n, a, b).as_convex()
    f_n = g_n - h_n
    f0 = float(f(0.0))
    gap = abs(float(f_n(0.0)) - f0)
    if not gap < radius:
        raise ResolutionTooCoarseError(
            f"|f_n(0) - f(0)| = {gap:.3g} is not below {radius}", inequality=f"|f_n(0) - f(0)| < {radius}"
        )
    L = lipschitz_const(f.g, f.h, a, b)
    M = budget_bound(L)
    polyline = Polyline.from_graph(f_n)
    slopes = f_n.slopes
    vertices, pairs = [], []
    for i in range(1, n):
        wedge = wedge_from_slopes(polyline.vertices[i], float(slopes[i - 1]), float(slopes[i]))
        if wedge is not None:
            vertices.append(i)
            pairs.append(KofuPair(wedge, method))
    cert = DCCertificate(
        f=f,
        n=n,
        L=L,
        M=M,
        L_star=M + 2.0 * L + 1.0,
        center=(0.0, f0),
        radius=float(radius),
        g_n=g_n,
        h_n=h_n,
        f_n=f_n,
        polyline=polyline,
        wedge_vertices=tuple(vertices),
        compensators=tuple(pairs),
    )
    logger.info(f"Built certificate for {f.name}: n={n}, L={L:.6g}, M={M:.6g}, L*={cert.L_star:.6g}, wedges={len(pairs)}")
    logger.debug(f"Compensator Lipschitz budget {cert.lipschitz_budget:.6g} against M={M:.6g}")
    return cert


def _expected_cover(cert: DCCertificate, z: np.ndarray):
    """Cover index chosen by the projection case analysis."""
    proj = polyline_distance(z, cert.polyline)
    xs = cert.f_n.xs
    for q in proj.projections:
        if not xs[1] - VERTEX_TOL <= q[0] <= xs[-2] + VERTEX_TOL:
            raise InternalConsistencyError(
                f"Projection {q.tolist()} of {z.tolist()} leaves the inner segments of graph f_n"
            )
    q = proj.nearest
    i = int(np.argmin(np.abs(xs - q[0])))
    if np.hypot(*(q - cert.polyline.vertices[i])) <= VERTEX_TOL:
        k = cert.nu_index(i)
        if k is not None:
            return k
    j = proj.segments[0]
    side = float((z - cert.polyline.starts[j]) @ cert.polyline.normals[j])
    return cert.mu_index(j, side >= 0.0)


def check_cover_batch(cert: DCCertificate, points, tol: float = COVER_TOL) -> np.ndarray:
    """Indices of cover functions agreeing with c*_n at each point of U."""
    p = as_points(points)
    outside = ~cert.contains(p)
    if np.any(outside):
        raise DomainError(f"Point {p[outside][0].tolist()} lies outside U")
    values = cert.cover_values(p)
    target = cert.c_star(p)
    residuals = np.abs(values - target[:, None])
    chosen = np.empty(p.shape[0], dtype=int)
    for row, z in enumerate(p):
        k = _expected_cover(cert, z)
        if residuals[row, k] > tol:
            alt = int(np.argmin(residuals[row]))
            if residuals[row, alt] > tol:
                raise CoverViolationError(
                    f"No cover function matches c*_n at {z.tolist()}: best residual {residuals[row, alt]:.3g}"
                )
            logger.debug(f"Cover at {z.tolist()} found by search ({alt}) instead of case analysis ({k})")
            k = alt
        chosen[row] = k
    return chosen


def check_cover(cert: DCCertificate, z, tol: float = COVER_TOL) -> int:
    return int(check_cover_batch(cert, np.asarray(z, dtype=float)[None, :], tol)[0])
