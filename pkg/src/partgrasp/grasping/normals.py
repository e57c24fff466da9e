"""Per-point surface normals via k-nearest-neighbor plane fits.

The normal is the smallest principal direction of the neighborhood scatter,
flipped toward the camera (the cloud lives in the camera frame, so visible
surfaces must face the origin). Neighborhoods of rank < 2 (collinear or
coincident points) yield invalid entries that downstream stages skip.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..geometry import freeze
from ..localization.pointcloud import PointCloud

_RANK_TOL = 1e-6  # second eigenvalue below this fraction of the largest -> degenerate


@dataclass(frozen=True)
class OrientedPointSet:
    positions: np.ndarray  # (N, 3)
    normals: np.ndarray  # (N, 3) unit where valid
    valid: np.ndarray  # (N,) bool
    provenance: np.ndarray  # (N,) uint8, carried over from the cloud
    source_pixel: np.ndarray  # (N, 2)

    def __post_init__(self):
        object.__setattr__(self, "positions", freeze(np.asarray(self.positions, dtype=np.float64)))
        object.__setattr__(self, "normals", freeze(np.asarray(self.normals, dtype=np.float64)))
        object.__setattr__(self, "valid", freeze(np.asarray(self.valid, dtype=bool)))
        object.__setattr__(self, "provenance", freeze(np.asarray(self.provenance, dtype=np.uint8)))
        object.__setattr__(self, "source_pixel", freeze(np.asarray(self.source_pixel, dtype=np.int32)))

    def __len__(self) -> int:
        return len(self.positions)

    def select(self, mask: np.ndarray) -> "OrientedPointSet":
        return OrientedPointSet(
            positions=self.positions[mask],
            normals=self.normals[mask],
            valid=self.valid[mask],
            provenance=self.provenance[mask],
            source_pixel=self.source_pixel[mask],
        )


def estimate_normals(cloud: PointCloud, k: int) -> OrientedPointSet:
    """Plane-fit normals over the k nearest neighbors (the point included).

    Requires 3 <= k <= len(cloud); both target and context points are
    processed.
    """
    n = len(cloud)
    if k < 3:
        raise ValueError("k must be at least 3")
    if n < k:
        raise ValueError(f"cloud has {n} points, fewer than k={k}")
    pts = cloud.points
    tree = cKDTree(pts)
    _, idx = tree.query(pts, k=k, workers=-1)
    neighbors = pts[idx]  # (N, k, 3)
    centered = neighbors - neighbors.mean(axis=1, keepdims=True)
    scatter = np.einsum("nki,nkj->nij", centered, centered)
    eigvals, eigvecs = np.linalg.eigh(scatter)  # ascending eigenvalues
    normals = eigvecs[:, :, 0]
    valid = eigvals[:, 1] > _RANK_TOL * np.maximum(eigvals[:, 2], 1e-300)
    valid &= eigvals[:, 2] > 0

    # Orient toward the camera at the origin: n . p < 0. Exact ties fall back
    # to sign rules on the components so the flip is total and deterministic.
    dots = np.einsum("ni,ni->n", normals, pts)
    flip = dots > 0
    tie = dots == 0
    if tie.any():
        nz = normals[:, 2]
        ny = normals[:, 1]
        nx = normals[:, 0]
        flip = flip | (tie & ((nz > 0) | ((nz == 0) & ((ny > 0) | ((ny == 0) & (nx > 0))))))
    normals = np.where(flip[:, None], -normals, normals)
    norms = np.linalg.norm(normals, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    normals = normals / safe[:, None]
    valid &= norms > 0

    return OrientedPointSet(
        positions=pts,
        normals=normals,
        valid=valid,
        provenance=cloud.provenance,
        source_pixel=cloud.source_pixel,
    )
