"""Small shared 3-D helpers: rotation checks, axis-angle rotations, camera
pose construction."""

from __future__ import annotations

import numpy as np

ROTATION_TOL = 1e-9


def is_rotation(matrix: np.ndarray, tol: float = ROTATION_TOL) -> bool:
    """True if ``matrix`` is orthonormal with determinant +1 within ``tol``."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.shape != (3, 3):
        return False
    if not np.all(np.isfinite(m)):
        return False
    err = np.abs(m.T @ m - np.eye(3)).max()
    return err <= tol and abs(np.linalg.det(m) - 1.0) <= tol


def rotation_about_axis(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation about a (non-zero) axis."""
    a = np.asarray(axis, dtype=np.float64)
    a = a / np.linalg.norm(a)
    k = np.array([[0.0, -a[2], a[1]], [a[2], 0.0, -a[0]], [-a[1], a[0], 0.0]])
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def rotate_vector(vec: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    return rotation_about_axis(axis, angle) @ np.asarray(vec, dtype=np.float64)


def look_at(eye, target, up=(0.0, 0.0, 1.0)) -> np.ndarray:
    """Camera-to-world rotation with +z toward ``target``, +x image-right,
    +y image-down (raster convention)."""
    eye = np.asarray(eye, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    up = np.asarray(up, dtype=np.float64)
    forward = target - eye
    norm = np.linalg.norm(forward)
    if norm < 1e-12:
        raise ValueError("look_at eye and target coincide")
    forward = forward / norm
    right = np.cross(forward, up)
    if np.linalg.norm(right) < 1e-9:
        # Looking straight along up: fall back to world x as right.
        right = np.cross(forward, np.array([1.0, 0.0, 0.0]))
        if np.linalg.norm(right) < 1e-9:
            right = np.cross(forward, np.array([0.0, 1.0, 0.0]))
    right = right / np.linalg.norm(right)
    down = np.cross(forward, right)
    return np.column_stack([right, down, forward])


def freeze(array: np.ndarray) -> np.ndarray:
    """Copy and mark read-only; dataclass fields holding rasters use this so
    frozen instances stay immutable in practice."""
    out = np.array(array, copy=True)
    out.flags.writeable = False
    return out
