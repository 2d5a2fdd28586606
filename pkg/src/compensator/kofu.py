"""Concave compensator of the distance to a wedge vertex.

For a wedge V with vertex v, bisector u and half-angle beta, the pair (psi, A)
satisfies |z - v| + psi(z) = A(z) on V, with A(z) = <z - v, u> affine and
psi = -phi_ext concave and K-Lipschitz, K = sqrt(2) tan(beta). Here phi_ext is
the infimal convolution of phi(w) = |w| - <w, u> (restricted to V) with K|.|.

phi_ext is positively homogeneous, so it is the support function of
S = (B(0,1) + polar(V) - e1) ∩ B(0,K) in wedge coordinates. The boundary of S
is the unit arc of directions within beta of e1, two segments along the polar
cone's edges, and the arc of the K-circle behind the corners P+-.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..geometry.polyline import as_point, as_points
from ..geometry.wedge import Wedge
from ..utils.error_handler import DomainError

SEARCH_XATOL = 1e-10
METHODS = ("support", "search")


@dataclass(frozen=True, eq=False)
class KofuPair:
    wedge: Wedge
    method: str = "support"

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"Unknown compensator method {self.method!r}; expected one of {METHODS}")
        beta = self.wedge.half_angle
        if not 0.0 < beta < math.pi / 2:
            raise DomainError(f"Half-angle {beta!r} outside (0, pi/2)")
        k = math.sqrt(2.0) * math.tan(beta)
        sb, cb = math.sin(beta), math.cos(beta)
        # corner where the polar-cone edge leaves the K-ball: |c + s d| = K
        s_star = -sb + math.sqrt(sb * sb - (2.0 - 2.0 * cb - k * k))
        corner = (cb - 1.0 - s_star * sb, sb + s_star * cb)
        object.__setattr__(self, "lipschitz", k)
        object.__setattr__(self, "corner", corner)
        object.__setattr__(self, "corner_angle", math.atan2(corner[1], corner[0]))

    def affine(self, points) -> np.ndarray:
        x, _ = self.wedge.local_coordinates(points)
        return x

    def phi(self, points) -> np.ndarray:
        """|z - v| - A(z), meaningful on the wedge."""
        x, y = self.wedge.local_coordinates(points)
        return np.hypot(x, y) - x

    def phi_ext(self, points) -> np.ndarray:
        if self.method == "search":
            return np.array([self._search(p) for p in as_points(points)])
        return self._support(points)

    def psi(self, points) -> np.ndarray:
        return -self.phi_ext(points)

    def __call__(self, z) -> float:
        return float(self.psi(as_point(z))[0])

    def _support(self, points) -> np.ndarray:
        x, y = self.wedge.local_coordinates(points)
        y = np.abs(y)
        r = np.hypot(x, y)
        theta = np.arctan2(y, x)
        beta = self.wedge.half_angle
        arc = np.where(theta <= beta, r - x, x * (math.cos(beta) - 1.0) + y * math.sin(beta))
        px, py = self.corner
        corner = px * x + py * y
        back = np.where(theta >= self.corner_angle, self.lipschitz * r, -np.inf)
        return np.maximum(np.maximum(arc, corner), back)

    def _search(self, point) -> float:
        """Nested bounded scalar minimisation of phi(w) + K|z - w| over the wedge, polar in w."""
        x, y = self.wedge.local_coordinates(point)
        zx, zy = float(x[0]), float(y[0])
        beta = self.wedge.half_angle
        k = self.lipschitz
        radius = 4.0 * math.hypot(zx, zy) + 1.0

        def along_ray(theta):
            c, s = math.cos(theta), math.sin(theta)

            def objective(rho):
                return rho * (1.0 - c) + k * math.hypot(zx - rho * c, zy - rho * s)

            res = minimize_scalar(objective, bounds=(0.0, radius), method="bounded", options={"xatol": SEARCH_XATOL})
            return min(float(res.fun), objective(0.0), objective(radius))

        res = minimize_scalar(along_ray, bounds=(-beta, beta), method="bounded", options={"xatol": SEARCH_XATOL})
        return min(float(res.fun), along_ray(-beta), along_ray(beta))


def kofu(wedge: Wedge, method: str = "support") -> KofuPair:
    return KofuPair(wedge, method)
