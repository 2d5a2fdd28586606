"""Distance to the graph of f|[0, p] near the endpoint (0, 0), region by region.

With f(0) = 0 and f L-Lipschitz on [0, p], extend f by the constant f(p) past p
and by the half-lines x -> +-2L x for x < 0, giving f_+ and f_-. The plane splits
into M0 (graph of f_+ over u >= 0), M1 (above it, or above v = -u/(2L) for u < 0),
M2 (below it, or below v = u/(2L)) and M3 (|v| < -u/L), and the distance to M0
equals 0, dist(., graph f_+), dist(., graph f_-) or |z| on the respective region.
On U(0, p/2) this is the distance to graph f|[0, p].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..config import Config
from ..dc.dc_function import DCFunction1D
from ..dc.interpolation import refine_to_tolerance
from ..geometry.polyline import Polyline, as_point
from ..utils.error_handler import DomainError, InternalConsistencyError
from ..utils.logger import logger

BOUNDARY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TruncatedGraph:
    f: DCFunction1D
    p: float
    L: float
    tolerance: float = Config.GRAPH_TOL

    def __post_init__(self):
        if not self.p > 0:
            raise DomainError(f"Truncation length p must be positive, got {self.p}")
        if not self.L > 0:
            raise DomainError(f"Lipschitz constant must be positive, got {self.L}")
        if abs(float(self.f(0.0))) > BOUNDARY_TOL:
            raise DomainError(f"{self.f.name} must vanish at 0 (got {float(self.f(0.0))!r}); recenter first")
        piece = refine_to_tolerance(self.f, 0.0, float(self.p), self.tolerance)
        object.__setattr__(self, "_piece", piece)
        object.__setattr__(self, "_fp", float(piece.ys[-1]))

    def extended(self, u: float, sign: int) -> float:
        """f_+ (sign=1) or f_- (sign=-1) at u."""
        if u < 0:
            return sign * 2.0 * self.L * u
        if u > self.p:
            return self._fp
        return float(self.f(u))

    def _extension_distance(self, z: np.ndarray, sign: int) -> float:
        reach = 2.0 * float(np.hypot(*z)) + 1.0
        left = np.array([-reach, -sign * 2.0 * self.L * reach])
        vertices = np.vstack([left, self._piece.vertices(), [self.p + reach, self._fp]])
        return float(Polyline(vertices).distances(z[None, :])[0])

    def regions(self, z) -> Dict[int, bool]:
        """Membership in M0..M3, each widened by BOUNDARY_TOL."""
        u, v = map(float, as_point(z))
        t = BOUNDARY_TOL * max(1.0, abs(u), abs(v))
        member = {0: False, 1: False, 2: False, 3: False}
        if u >= -t:
            fu = self.extended(max(u, 0.0), 1)
            member[0] = abs(v - fu) <= t
            member[1] = v > fu - t
            member[2] = v < fu + t
        if u < t:
            member[1] |= v > -u / (2.0 * self.L) - t
            member[2] |= v < u / (2.0 * self.L) + t
            member[3] = u / self.L - t < v < -u / self.L + t
        return member

    def candidates(self, z) -> Dict[int, float]:
        z = as_point(z)
        out = {}
        for region, inside in self.regions(z).items():
            if not inside:
                continue
            if region == 0:
                out[0] = 0.0
            elif region == 1:
                out[1] = self._extension_distance(z, 1)
            elif region == 2:
                out[2] = self._extension_distance(z, -1)
            else:
                out[3] = float(np.hypot(*z))
        return out

    def distance(self, z) -> float:
        found = self.candidates(z)
        if not found:
            raise InternalConsistencyError(f"Point {as_point(z).tolist()} lies in none of the regions M0..M3")
        values = list(found.values())
        spread = max(values) - min(values)
        agree = max(1e-9, 10.0 * self.tolerance)
        if spread > agree:
            raise InternalConsistencyError(
                f"Region candidates disagree at {as_point(z).tolist()}: {found} (spread {spread:.3g})"
            )
        if len(found) > 1:
            logger.debug(f"Point {as_point(z).tolist()} on a region boundary, candidates {found}")
        return min(values)


def truncated_graph_distance(z, f: DCFunction1D, p: float, L: float, tolerance: float = Config.GRAPH_TOL) -> float:
    return TruncatedGraph(f, p, L, tolerance).distance(z)
