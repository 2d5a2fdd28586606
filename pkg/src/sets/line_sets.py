"""Closed subsets of the real line given by their components."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..utils.error_handler import DomainError
from .primitives import Point, Segment
from .scene import Scene


@dataclass(frozen=True, eq=False)
class Interval1DSet:
    """Sorted disjoint closed intervals (lo == hi for points) plus declared limit points.

    Infinite families are stored as a finite truncation; `limit_points` records the
    accumulation points of the full family, which belong to the set.
    """

    intervals: Tuple[Tuple[float, float], ...]
    limit_points: Tuple[float, ...] = ()

    def __post_init__(self):
        ivs = tuple(sorted((float(lo), float(hi)) for lo, hi in self.intervals))
        for lo, hi in ivs:
            if lo > hi:
                raise DomainError(f"Interval [{lo}, {hi}] is reversed")
        for (_, hi), (lo, _) in zip(ivs, ivs[1:]):
            if lo <= hi:
                raise DomainError(f"Components overlap or touch at {lo!r}")
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "limit_points", tuple(sorted(float(p) for p in self.limit_points)))

    @classmethod
    def from_points(cls, points: Sequence[float], limit_points: Sequence[float] = ()) -> "Interval1DSet":
        pts = sorted(set(float(p) for p in points))
        return cls(tuple((p, p) for p in pts), tuple(limit_points))

    @property
    def components(self) -> int:
        return len(self.intervals)

    def distances(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if not self.intervals and not self.limit_points:
            raise DomainError("Distance to an empty set is undefined")
        best = np.full(xs.shape, np.inf)
        for lo, hi in self.intervals:
            best = np.minimum(best, np.maximum(np.maximum(lo - xs, xs - hi), 0.0))
        for p in self.limit_points:
            best = np.minimum(best, np.abs(xs - p))
        return best

    def gaps(self) -> Tuple[Tuple[float, float], ...]:
        """Bounded open gaps between consecutive components."""
        return tuple((hi, lo) for (_, hi), (lo, _) in zip(self.intervals, self.intervals[1:]))

    def to_scene(self, y: float = 0.0) -> Scene:
        """The set embedded in the plane on the line {y = const}."""
        prims = []
        for lo, hi in self.intervals:
            prims.append(Point((lo, y)) if lo == hi else Segment((lo, y), (hi, y)))
        covered = {lo for lo, hi in self.intervals if lo == hi}
        prims.extend(Point((p, y)) for p in self.limit_points if p not in covered)
        return Scene(tuple(prims), {"embedding": "line"})


def components_locally_finite(a: Interval1DSet, window: Tuple[float, float]) -> Tuple[bool, Optional[float]]:
    """True when only finitely many components meet every compact piece of the window.

    The truncation is finite, so the answer rests on the declared limit points:
    a limit point inside the closed window is the witness of failure.
    """
    lo, hi = map(float, window)
    if not lo <= hi:
        raise DomainError(f"Window [{lo}, {hi}] is empty")
    for p in a.limit_points:
        if lo <= p <= hi:
            return False, p
    return True, None
