"""Distance identities for closed sets and their builtin test setups.

- boundary: d_bd(M) = max(d_M, d_cl(complement M))
- tube: d_B(x) + r = dist(x, {d_A = r}) for x in int A, B = cl(complement A), 0 < r < reach A
- squared distance: d_F^2(z) = |z|^2 - c_F(z), c_F(z) = sup_{a in F} (2<z, a> - |a|^2) convex
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from ..config import Config
from ..dc.builtins import absolute, neg_quadratic, pl
from ..geometry.polyline import as_points
from ..utils.error_handler import DomainError, PreconditionError
from ..utils.logger import logger
from ..verify.reports import CheckReport, worst
from ..verify.sampling import BoxRegion, grid, sample_points
from .primitives import Disk, Epigraph, Graph, HalfPlane, Hypograph, Point, Ray, Segment
from .scene import Scene


def boundary_identity_check(
    m: Scene, complement: Scene, boundary: Scene, points, tol: float = Config.IDENTITY_TOL
) -> CheckReport:
    if boundary.is_empty:
        raise PreconditionError("The boundary is empty; the boundary identity does not apply")
    p = as_points(points)
    d_bd = boundary.distances(p)
    rhs = np.maximum(m.distances(p), complement.distances(p))
    # d_bd >= max(d_M, d_complement) always; report the signed gap on failure
    below = float(np.max(rhs - d_bd, initial=0.0))
    return worst("boundary-identity", np.abs(d_bd - rhs), p, tol, inequality_violation=below)


@dataclass(frozen=True, eq=False)
class BoundaryTriple:
    name: str
    m: Scene
    complement: Scene
    boundary: Scene
    bounds: Tuple[float, float, float, float]

    def check(self, resolution: int = 32, tol: float = Config.IDENTITY_TOL) -> CheckReport:
        report = boundary_identity_check(self.m, self.complement, self.boundary, grid(self.bounds, resolution), tol)
        report.name = f"boundary-identity[{self.name}]"
        return report


def boundary_triple(name: str) -> BoundaryTriple:
    if name == "half-plane":
        return BoundaryTriple(
            name,
            Scene((HalfPlane((0.0, 1.0), 0.0),)),
            Scene((HalfPlane((0.0, -1.0), 0.0),)),
            Scene((HalfPlane((0.0, 1.0), 0.0, "boundary"),)),
            (-3.0, 3.0, -3.0, 3.0),
        )
    if name == "disk":
        return BoundaryTriple(
            name,
            Scene((Disk((0.0, 0.0), 1.0),)),
            Scene((Disk((0.0, 0.0), 1.0, "exterior"),)),
            Scene((Disk((0.0, 0.0), 1.0, "boundary"),)),
            (-2.0, 2.0, -2.0, 2.0),
        )
    if name == "epigraph-abs":
        f = absolute()
        return BoundaryTriple(
            name,
            Scene((Epigraph(f, (-3.0, 3.0)),)),
            Scene((Hypograph(f, (-3.0, 3.0)), HalfPlane((1.0, 0.0), -3.0), HalfPlane((-1.0, 0.0), -3.0))),
            Scene((Graph(f, (-3.0, 3.0)), Ray((-3.0, 3.0), (0.0, 1.0)), Ray((3.0, 3.0), (0.0, 1.0)))),
            (-4.0, 4.0, -2.0, 6.0),
        )
    raise DomainError(f"Unknown boundary triple {name!r}; known: half-plane, disk, epigraph-abs")


BOUNDARY_TRIPLES = ("half-plane", "disk", "epigraph-abs")


@dataclass(frozen=True, eq=False)
class TubeSetup:
    """A with declared reach, B = cl(complement A), and the level set builder r -> {d_A = r}."""

    name: str
    a: Scene
    b: Scene
    level_set: Callable[[float], Scene]
    interior: BoxRegion
    inside: Callable[[np.ndarray], np.ndarray]

    @property
    def reach(self) -> float:
        r = self.a.reach
        if r is None:
            raise PreconditionError(f"{self.name}: no declared reach")
        return r

    def interior_samples(self, count: int, seed: int) -> np.ndarray:
        p = sample_points(self.interior, count, seed)
        return p[self.inside(p)]


def _parabola_offset(r: float, nodes: int = 20001) -> Scene:
    # outer parallel curve of the graph of -x^2, a graph over x since x + 2xr/sqrt(1+4x^2) increases
    x = np.linspace(-3.0, 3.0, nodes)
    norm = np.sqrt(1.0 + 4.0 * x * x)
    ox = x + r * 2.0 * x / norm
    oy = -x * x + r / norm
    return Scene((Graph(pl(ox, oy), (float(ox[0]), float(ox[-1]))),))


def tube_setup(name: str) -> TubeSetup:
    if name == "disk":
        return TubeSetup(
            name,
            Scene((Disk((0.0, 0.0), 1.0),)),
            Scene((Disk((0.0, 0.0), 1.0, "exterior"),)),
            lambda r: Scene((Disk((0.0, 0.0), 1.0 + r, "boundary"),)),
            BoxRegion(-0.95, 0.95, -0.95, 0.95),
            lambda p: np.hypot(p[:, 0], p[:, 1]) < 1.0,
        )
    if name == "half-plane":
        return TubeSetup(
            name,
            Scene((HalfPlane((0.0, 1.0), 0.0),)),
            Scene((HalfPlane((0.0, -1.0), 0.0),)),
            lambda r: Scene((HalfPlane((0.0, 1.0), r, "boundary"),)),
            BoxRegion(-1.0, 1.0, -3.0, -0.01),
            lambda p: p[:, 1] < 0.0,
        )
    if name == "hypograph-neg-quadratic":
        f = neg_quadratic()
        return TubeSetup(
            name,
            Scene((Hypograph(f, (-3.0, 3.0)),)),
            Scene((Epigraph(f, (-3.0, 3.0)), HalfPlane((1.0, 0.0), -3.0), HalfPlane((-1.0, 0.0), -3.0))),
            _parabola_offset,
            BoxRegion(-1.0, 1.0, -2.0, -0.01),
            lambda p: p[:, 1] < -p[:, 0] ** 2,
        )
    raise DomainError(f"Unknown tube setup {name!r}; known: disk, half-plane, hypograph-neg-quadratic")


TUBE_SETUPS = ("disk", "half-plane", "hypograph-neg-quadratic")


def tube_identity_check(
    setup: TubeSetup, r: float, points=None, count: int = 1024, seed: int = Config.SEED, tol: float = Config.IDENTITY_TOL
) -> CheckReport:
    reach = setup.reach
    if not 0.0 < r < reach:
        raise PreconditionError(f"{setup.name}: tube radius {r} must lie in (0, reach = {reach})")
    p = setup.interior_samples(count, seed) if points is None else as_points(points)
    level = setup.level_set(r)
    residual = np.abs(setup.b.distances(p) + r - level.distances(p))
    logger.debug(f"Tube identity on {setup.name} with r={r} at {p.shape[0]} interior points")
    return worst(f"tube-identity[{setup.name}]", residual, p, tol, seed, radius=r)


def _support_segments(scene: Scene) -> List[Tuple[np.ndarray, np.ndarray]]:
    out = []
    for prim in scene.primitives:
        if isinstance(prim, Point):
            a = np.asarray(prim.at, dtype=float)
            out.append((a, a))
        elif isinstance(prim, Segment):
            out.append((np.asarray(prim.a, float), np.asarray(prim.b, float)))
        elif isinstance(prim, Graph) and prim.exact:
            v = prim.vertices
            out.extend((v[i], v[i + 1]) for i in range(v.shape[0] - 1))
            if v.shape[0] == 1:
                out.append((v[0], v[0]))
        else:
            raise DomainError(f"Closed-form support needs points, segments or PL graphs, got {type(prim).__name__}")
    return out


def asplund_support_batch(scene: Scene, points) -> Tuple[np.ndarray, np.ndarray]:
    """c_F on an (m, 2) array and the residual |d_F^2 - (|z|^2 - c_F)|."""
    p = as_points(points)
    segments = _support_segments(scene)
    best = np.full(p.shape[0], -math.inf)
    for a, b in segments:
        delta = b - a
        length2 = float(delta @ delta)
        if length2 == 0.0:
            t = np.zeros(p.shape[0])
        else:
            t = np.clip(((p[:, 0] - a[0]) * delta[0] + (p[:, 1] - a[1]) * delta[1]) / length2, 0.0, 1.0)
        qx = a[0] + t * delta[0]
        qy = a[1] + t * delta[1]
        best = np.maximum(best, 2.0 * (p[:, 0] * qx + p[:, 1] * qy) - (qx * qx + qy * qy))
    d = scene.distances(p)
    residual = np.abs(d * d - (p[:, 0] ** 2 + p[:, 1] ** 2 - best))
    return best, residual


def asplund_support(scene: Scene, z) -> Tuple[float, float]:
    c, residual = asplund_support_batch(scene, np.asarray(z, dtype=float)[None, :])
    return float(c[0]), float(residual[0])
