from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..config import Config
from ..dc.builtins import function_from_dict
from ..geometry.isometry import PlanarIsometry
from ..geometry.polyline import ProjectionResult, as_point, as_points
from ..utils.error_handler import ConfigError, DCDistError, DomainError
from ..utils.logger import logger
from .primitives import (
    BetweenGraphs,
    Disk,
    Epigraph,
    Graph,
    HalfPlane,
    Hypograph,
    Point,
    Primitive,
    Ray,
    Segment,
    Tube,
    merge_projections,
)


@dataclass(frozen=True, eq=False)
class Scene:
    """Finite union of closed primitives."""

    primitives: Tuple[Primitive, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))

    def __or__(self, other: "Scene") -> "Scene":
        return Scene(self.primitives + other.primitives, {**self.metadata, **other.metadata})

    @property
    def is_empty(self) -> bool:
        return not self.primitives

    def distances(self, points) -> np.ndarray:
        if self.is_empty:
            raise DomainError("Distance to an empty scene is undefined")
        p = as_points(points)
        return np.min(np.vstack([prim.distances(p) for prim in self.primitives]), axis=0)

    def distance(self, z) -> float:
        return float(self.distances(as_point(z)[None, :])[0])

    def project(self, z) -> ProjectionResult:
        return scene_distance(z, self)

    @property
    def reach(self) -> Optional[float]:
        """Declared reach: metadata override, else that of a single primitive."""
        if "reach" in self.metadata:
            return float(self.metadata["reach"])
        if len(self.primitives) == 1:
            return self.primitives[0].reach
        return None


def scene_distance(z, scene: Scene) -> ProjectionResult:
    if scene.is_empty:
        raise DomainError("Distance to an empty scene is undefined")
    z = as_point(z)
    return merge_projections([prim.project(z) for prim in scene.primitives])


# scene documents


def _pair(doc, key):
    try:
        x, y = doc[key]
        return (float(x), float(y))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"Primitive field {key!r} must be a pair of numbers") from e


def _interval(doc):
    return _pair(doc, "interval")


def _isometry(doc) -> PlanarIsometry:
    if "isometry" not in doc:
        return PlanarIsometry()
    iso = doc["isometry"]
    return PlanarIsometry(float(iso.get("angle", 0.0)), _pair(iso, "translation") if "translation" in iso else (0.0, 0.0))


def primitive_from_dict(doc: dict) -> Primitive:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError("Each primitive needs a 'kind'")
    kind = doc["kind"]
    reach = doc.get("reach")
    reach = None if reach is None else float(reach)
    tol = float(doc.get("tolerance", Config.GRAPH_TOL))
    try:
        if kind == "point":
            return Point(_pair(doc, "at"), reach)
        if kind == "segment":
            return Segment(_pair(doc, "a"), _pair(doc, "b"), reach)
        if kind == "ray":
            return Ray(_pair(doc, "origin"), _pair(doc, "direction"), reach)
        if kind == "half_plane":
            return HalfPlane(_pair(doc, "normal"), float(doc["offset"]), doc.get("part", "solid"), reach)
        if kind == "disk":
            return Disk(_pair(doc, "center"), float(doc["radius"]), doc.get("part", "solid"), reach)
        if kind == "graph":
            f = function_from_dict(doc["function"])
            return Graph(f, _interval(doc), _isometry(doc), tol, reach)
        if kind in ("epigraph", "hypograph"):
            cls = Epigraph if kind == "epigraph" else Hypograph
            f = function_from_dict(doc["function"])
            return cls(f, _interval(doc), tolerance=tol, reach_override=reach)
        if kind == "between":
            lower = function_from_dict(doc["lower"])
            upper = function_from_dict(doc["upper"])
            return BetweenGraphs(lower, upper, _interval(doc), tol, reach)
        if kind == "tube":
            base = doc["base"]
            base = scene_from_dict(base) if "primitives" in base else primitive_from_dict(base)
            return Tube(base, float(doc["radius"]), reach)
    except KeyError as e:
        raise ConfigError(f"Primitive {kind!r} is missing field {e}") from e
    except ConfigError:
        raise
    except DCDistError as e:
        raise ConfigError(f"Invalid {kind!r} primitive: {e}") from e
    raise ConfigError(f"Unknown primitive kind {kind!r}")


def scene_from_dict(doc: dict) -> Scene:
    if not isinstance(doc, dict) or not isinstance(doc.get("primitives"), list):
        raise ConfigError("Scene document needs a 'primitives' list")
    if not doc["primitives"]:
        raise ConfigError("Scene document has no primitives")
    prims = tuple(primitive_from_dict(p) for p in doc["primitives"])
    return Scene(prims, dict(doc.get("metadata", {})))


def load_scene(spec: str) -> Scene:
    """Gallery name or path to a JSON scene document."""
    from .gallery import GALLERY, gallery

    if spec in GALLERY:
        return gallery(spec)
    if not os.path.isfile(spec):
        raise ConfigError(f"{spec!r} is neither a gallery scene nor a readable file")
    logger.debug(f"Loading scene document {spec}")
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Could not read scene document {spec}: {e}") from e
    scene = scene_from_dict(doc)
    logger.info(f"Loaded scene with {len(scene.primitives)} primitives from {spec}")
    return scene

