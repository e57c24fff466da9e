"""Organized point clouds: depth back-projection through the pinhole model,
forward projection, mask-registered ROI cropping, and ASCII PLY export.

Points keep their source pixel, so mask registration is a raster lookup
rather than a geometric alignment step.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import EmptyTargetError
from ..geometry import freeze
from ..scene.primitives import CameraIntrinsics
from .morphology import BinaryMask

PROVENANCE_CONTEXT = 0
PROVENANCE_TARGET = 1


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # (N, 3) float64, meters, camera frame (z > 0)
    provenance: np.ndarray  # (N,) uint8: 1 = target, 0 = context
    source_pixel: np.ndarray  # (N, 2) int32, (u, v)
    warnings: tuple = ()

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64).reshape(-1, 3)
        prov = np.asarray(self.provenance, dtype=np.uint8).reshape(-1)
        px = np.asarray(self.source_pixel, dtype=np.int32).reshape(-1, 2)
        if not (len(pts) == len(prov) == len(px)):
            raise ValueError("points, provenance, source_pixel lengths differ")
        object.__setattr__(self, "points", freeze(pts))
        object.__setattr__(self, "provenance", freeze(prov))
        object.__setattr__(self, "source_pixel", freeze(px))
        object.__setattr__(self, "warnings", tuple(self.warnings))

    def __len__(self) -> int:
        return len(self.points)

    @property
    def target_indices(self) -> np.ndarray:
        return np.nonzero(self.provenance == PROVENANCE_TARGET)[0]

    @property
    def context_indices(self) -> np.ndarray:
        return np.nonzero(self.provenance == PROVENANCE_CONTEXT)[0]

    def with_warning(self, warning: str) -> "PointCloud":
        return replace(self, warnings=self.warnings + (warning,))


def back_project(depth_mm: np.ndarray, intr: CameraIntrinsics) -> PointCloud:
    """One point per valid-depth pixel:

        z = d / 1000,  x = (u - cx) z / fx,  y = (v - cy) z / fy

    Invalid (0) pixels contribute nothing; provenance starts as context and
    is assigned by crop_roi.
    """
    depth = np.asarray(depth_mm)
    if depth.shape != (intr.height, intr.width):
        raise ValueError("depth raster does not match the intrinsics")
    vv, uu = np.nonzero(depth > 0)
    z = depth[vv, uu].astype(np.float64) / 1000.0
    x = (uu.astype(np.float64) - intr.cx) * z / intr.fx
    y = (vv.astype(np.float64) - intr.cy) * z / intr.fy
    return PointCloud(
        points=np.column_stack([x, y, z]),
        provenance=np.zeros(len(z), dtype=np.uint8),
        source_pixel=np.column_stack([uu, vv]).astype(np.int32),
    )


def project(points: np.ndarray, intr: CameraIntrinsics) -> np.ndarray:
    """Forward pinhole projection to (u, v) pixel coordinates (float)."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    u = intr.fx * pts[:, 0] / pts[:, 2] + intr.cx
    v = intr.fy * pts[:, 1] / pts[:, 2] + intr.cy
    return np.column_stack([u, v])


def crop_roi(cloud: PointCloud, target_mask: BinaryMask, expanded_mask: BinaryMask) -> PointCloud:
    """Keep points whose source pixel lies in the expanded mask; tag as target
    where the pixel is in the target mask, else context (dilation ring plus
    nearby background)."""
    if target_mask.data.shape != expanded_mask.data.shape:
        raise ValueError("mask shapes differ")
    if np.any(target_mask.data > expanded_mask.data):
        raise ValueError("target mask must be contained in the expanded mask")
    u = cloud.source_pixel[:, 0]
    v = cloud.source_pixel[:, 1]
    keep = expanded_mask.data[v, u] > 0
    prov = target_mask.data[v, u][keep].astype(np.uint8)
    if not prov.any():
        raise EmptyTargetError("no target-tagged points survive the crop")
    return PointCloud(
        points=cloud.points[keep],
        provenance=prov,
        source_pixel=cloud.source_pixel[keep],
        warnings=cloud.warnings,
    )


def save_ply(cloud: PointCloud, path) -> None:
    """ASCII PLY with per-vertex provenance and source pixel."""
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(cloud)}",
        "property float x",
        "property float y",
        "property float z",
        "property uchar provenance",
        "property int u",
        "property int v",
        "end_header",
    ]
    for p, tag, (u, v) in zip(cloud.points, cloud.provenance, cloud.source_pixel):
        lines.append(f"{p[0]:.6f} {p[1]:.6f} {p[2]:.6f} {int(tag)} {int(u)} {int(v)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
