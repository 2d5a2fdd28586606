from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PlanarIsometry:
    """Rotation by `angle` (radians, counter-clockwise) followed by `translation`."""

    angle: float = 0.0
    translation: tuple = (0.0, 0.0)

    @property
    def rotation(self) -> np.ndarray:
        c, s = np.cos(self.angle), np.sin(self.angle)
        return np.array([[c, -s], [s, c]])

    @property
    def offset(self) -> np.ndarray:
        return np.asarray(self.translation, dtype=float)

    @property
    def is_identity(self) -> bool:
        return self.angle == 0.0 and tuple(self.translation) == (0.0, 0.0)

    def apply(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.angle == 0.0:
            return points + self.offset
        return points @ self.rotation.T + self.offset

    def inverse_apply(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float) - self.offset
        if self.angle == 0.0:
            return points
        return points @ self.rotation

    def inverse(self) -> "PlanarIsometry":
        back = -(self.rotation.T @ self.offset)
        return PlanarIsometry(-self.angle, (float(back[0]), float(back[1])))

    def compose(self, inner: "PlanarIsometry") -> "PlanarIsometry":
        """self ∘ inner."""
        t = self.rotation @ inner.offset + self.offset
        return PlanarIsometry(self.angle + inner.angle, (float(t[0]), float(t[1])))

    @classmethod
    def translation_by(cls, dx: float, dy: float) -> "PlanarIsometry":
        return cls(0.0, (float(dx), float(dy)))
