"""Scene description types: pinhole intrinsics, rigid poses, part-labelled
primitives, and whole scenes. All lengths are meters; colors are 8-bit RGB.

The same primitives double as the geometric oracle: ``signed_distance``
evaluates the exact distance field used by tests and by the ablation
classifier, independent of the ray caster.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SceneValidationError
from ..geometry import freeze, is_rotation

SHAPES = ("box", "cylinder", "sphere", "plane")

# dimensions per shape:
#   box      (hx, hy, hz) half-extents
#   cylinder (radius, height), axis = local z, centered on the origin
#   sphere   (radius,)
#   plane    (hu, hv) rectangle half-extents in the local z=0 plane
_DIM_COUNT = {"box": 3, "cylinder": 2, "sphere": 1, "plane": 2}


@dataclass(frozen=True)
class CameraIntrinsics:
    width: int
    height: int
    fx: float
    fy: float
    cx: float
    cy: float

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise SceneValidationError("raster dimensions must be >= 1")
        if self.fx <= 0 or self.fy <= 0:
            raise SceneValidationError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise SceneValidationError("principal point outside the raster")


@dataclass(frozen=True)
class Pose:
    """Rigid transform mapping local coordinates into the parent frame."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=np.float64)
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        if not is_rotation(r):
            raise SceneValidationError("pose rotation is not orthonormal with det +1")
        object.__setattr__(self, "rotation", freeze(r))
        object.__setattr__(self, "translation", freeze(t))

    @classmethod
    def identity(cls) -> "Pose":
        return cls(np.eye(3), np.zeros(3))

    def to_local_points(self, points: np.ndarray) -> np.ndarray:
        return (np.asarray(points, dtype=np.float64) - self.translation) @ self.rotation

    def to_local_dirs(self, dirs: np.ndarray) -> np.ndarray:
        return np.asarray(dirs, dtype=np.float64) @ self.rotation

    def to_world_points(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=np.float64) @ self.rotation.T + self.translation


@dataclass(frozen=True)
class PartPrimitive:
    part_name: str
    shape: str
    dimensions: tuple
    pose: Pose
    color: tuple

    def __post_init__(self):
        if not self.part_name:
            raise SceneValidationError("part_name must be non-empty")
        if self.shape not in SHAPES:
            raise SceneValidationError(f"unknown shape {self.shape!r}")
        dims = tuple(float(d) for d in self.dimensions)
        if len(dims) != _DIM_COUNT[self.shape]:
            raise SceneValidationError(
                f"{self.shape} expects {_DIM_COUNT[self.shape]} dimensions, got {len(dims)}"
            )
        if any(d <= 0 for d in dims):
            raise SceneValidationError("all dimensions must be positive")
        color = tuple(int(c) for c in self.color)
        if len(color) != 3 or any(not 0 <= c <= 255 for c in color):
            raise SceneValidationError("color must be an RGB triple in 0..255")
        object.__setattr__(self, "dimensions", dims)
        object.__setattr__(self, "color", color)


@dataclass(frozen=True)
class SceneObject:
    name: str
    parts: tuple

    def __post_init__(self):
        if not self.name:
            raise SceneValidationError("object name must be non-empty")
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise SceneValidationError(f"object {self.name!r} has no parts")


@dataclass(frozen=True)
class SceneDescription:
    camera_intrinsics: CameraIntrinsics
    camera_pose: Pose
    objects: tuple
    background: tuple
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "background", tuple(self.background))
        names = [o.name for o in self.objects]
        if len(set(names)) != len(names):
            raise SceneValidationError("object names must be unique")
        pairs = [(o.name, p.part_name) for o in self.objects for p in o.parts]
        if len(set(pairs)) != len(pairs):
            raise SceneValidationError("(object, part) pairs must be unique")
        if not self.background:
            raise SceneValidationError("at least one background primitive is required")


def _local_signed_distance(prim: PartPrimitive, local: np.ndarray) -> np.ndarray:
    x, y, z = local[..., 0], local[..., 1], local[..., 2]
    if prim.shape == "sphere":
        (r,) = prim.dimensions
        return np.linalg.norm(local, axis=-1) - r
    if prim.shape == "box":
        hx, hy, hz = prim.dimensions
        q = np.abs(local) - np.array([hx, hy, hz])
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
        inside = np.minimum(q.max(axis=-1), 0.0)
        return outside + inside
    if prim.shape == "cylinder":
        r, h = prim.dimensions
        dr = np.hypot(x, y) - r
        dz = np.abs(z) - h / 2.0
        outside = np.hypot(np.maximum(dr, 0.0), np.maximum(dz, 0.0))
        inside = np.minimum(np.maximum(dr, dz), 0.0)
        return outside + inside
    # plane: zero-thickness rectangle, unsigned distance
    hu, hv = prim.dimensions
    qx = np.maximum(np.abs(x) - hu, 0.0)
    qy = np.maximum(np.abs(y) - hv, 0.0)
    return np.sqrt(qx * qx + qy * qy + z * z)


def signed_distance(prim: PartPrimitive, points_world: np.ndarray) -> np.ndarray:
    """Distance from world-frame points to the primitive surface (negative
    inside solids; planes are zero-thickness, so always >= 0)."""
    pts = np.atleast_2d(np.asarray(points_world, dtype=np.float64))
    return _local_signed_distance(prim, prim.pose.to_local_points(pts))
