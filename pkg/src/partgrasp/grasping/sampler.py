"""Antipodal pair sampling over target-tagged oriented points.

A pair (p1, p2) within the gripper's stroke is accepted when both contact
normals oppose the closing axis a = (p2 - p1)/|p2 - p1| inside the friction
cone:

    q = min(-n1 . a, n2 . a) >= cos(friction half-angle)

Each accepted pair spawns K discrete approach rotations about the closing
axis; approaches must come from the camera side (positive camera-z travel),
which discards candidates that would reach the surface from behind.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..geometry import rotation_about_axis
from .gripper import GripperModel, OPEN_CLEARANCE
from .normals import OrientedPointSet

_MIN_PAIR_DISTANCE = 1e-6
_CAMERA_Z = np.array([0.0, 0.0, 1.0])
# Slack added to the partner-search corridor for quantization noise.
_CORRIDOR_SLACK = 0.001
# First-contact draw budget per requested pair.
_DRAW_MULTIPLIER = 6


@dataclass(frozen=True)
class GraspCandidate:
    """Raw sampler output, prior to collision filtering and scoring."""

    rotation: np.ndarray  # columns = closing / finger / approach
    translation: np.ndarray
    contact_width: float
    width: float  # commanded opening (contact + clearance, capped)
    approach_distance: float
    quality: float  # antipodal cone margin q
    contact_a: np.ndarray
    contact_b: np.ndarray


def _pair_indices(
    positions: np.ndarray,
    normals: np.ndarray,
    max_width: float,
    max_pairs: int,
    corridor_half_angle_deg: float,
    rng,
) -> list:
    """Unordered index pairs within max_width.

    Small clouds are enumerated exhaustively. Larger ones are sampled: draw a
    first contact, then pick the partner among points inside a cone around its
    inward normal (where an antipodal contact must sit) with an opposing
    normal, which keeps the draw budget productive instead of burning it on
    non-opposing pairs.
    """
    n = len(positions)
    tree = cKDTree(positions)
    if n * (n - 1) // 2 <= max_pairs:
        return sorted(tree.query_pairs(max_width))
    tan_corridor = float(np.tan(np.deg2rad(corridor_half_angle_deg)))
    # draw the first-contact sequence up front so neighborhoods batch into one
    # parallel query; the outcome matches a draw-by-draw loop exactly
    draws = rng.integers(n, size=_DRAW_MULTIPLIER * max_pairs)
    unique_draws = np.unique(draws)
    balls = tree.query_ball_point(positions[unique_draws], max_width, workers=-1)
    ball_cache = {int(i): np.asarray(b, dtype=int) for i, b in zip(unique_draws, balls)}
    pairs = []
    seen = set()
    for raw_i in draws:
        if len(pairs) >= max_pairs:
            break
        i = int(raw_i)
        neighbors = ball_cache[i]
        if len(neighbors) <= 1:
            continue
        rel = positions[neighbors] - positions[i]
        inward = -normals[i]
        along = rel @ inward
        ahead = along > _MIN_PAIR_DISTANCE
        if not ahead.any():  # support surfaces: nothing in front of the ray
            continue
        perp = np.linalg.norm(rel - np.outer(along, inward), axis=1)
        opposing = normals[neighbors] @ normals[i] < 0.0  # contacts must face apart
        in_cone = ahead & (perp <= along * tan_corridor + _CORRIDOR_SLACK)
        good = neighbors[in_cone & opposing & (neighbors != i)]
        if len(good) == 0:
            continue
        # take the most antipodal partner for this contact (deterministic)
        rel_good = positions[good] - positions[i]
        dist_good = np.linalg.norm(rel_good, axis=1)
        axes = rel_good / dist_good[:, None]
        quality = np.minimum(-(axes @ normals[i]), np.einsum("ni,ni->n", normals[good], axes))
        j = int(good[int(np.argmax(quality))])
        key = (min(i, j), max(i, j))
        if key in seen:
            continue
        seen.add(key)
        pairs.append(key)
    return pairs


def _approach_base(closing: np.ndarray) -> np.ndarray:
    """Deterministic reference approach direction: the camera forward axis
    projected off the closing axis (falls back to x when degenerate)."""
    v = _CAMERA_Z - np.dot(_CAMERA_Z, closing) * closing
    norm = np.linalg.norm(v)
    if norm < 1e-9:
        v = np.array([1.0, 0.0, 0.0]) - closing[0] * closing
        norm = np.linalg.norm(v)
    return v / norm


def sample_antipodal(
    points: OrientedPointSet,
    gripper: GripperModel,
    friction_half_angle_deg: float,
    rng,
    max_pairs: int = 500,
    approach_count: int = 8,
) -> list:
    """Candidate grasps on target-tagged points (pass a pre-filtered set).

    Requires at least two valid points; returns an empty list when no pair
    passes the gates (not an error).
    """
    sel = points.select(points.valid)
    if len(sel) < 2:
        raise ValueError("antipodal sampling needs at least 2 valid target points")
    pos, nrm = sel.positions, sel.normals
    cos_limit = float(np.cos(np.deg2rad(friction_half_angle_deg)))
    out = []
    pairs = _pair_indices(pos, nrm, gripper.max_width, max_pairs, friction_half_angle_deg, rng)
    for i, j in pairs:
        p1, p2 = pos[i], pos[j]
        delta = p2 - p1
        dist = float(np.linalg.norm(delta))
        if not _MIN_PAIR_DISTANCE < dist <= gripper.max_width:
            continue
        a = delta / dist
        q = float(min(-np.dot(nrm[i], a), np.dot(nrm[j], a)))
        if q < cos_limit:
            continue
        center = (p1 + p2) / 2.0
        base = _approach_base(a)
        width = min(dist + OPEN_CLEARANCE, gripper.max_width)
        for kk in range(approach_count):
            approach = rotation_about_axis(a, 2.0 * np.pi * kk / approach_count) @ base
            if approach[2] <= 1e-9:  # must travel into the scene (camera side)
                continue
            finger = np.cross(approach, a)
            rotation = np.column_stack([a, finger, approach])
            out.append(
                GraspCandidate(
                    rotation=rotation,
                    translation=center,
                    contact_width=dist,
                    width=width,
                    approach_distance=gripper.finger_length,
                    quality=q,
                    contact_a=p1,
                    contact_b=p2,
                )
            )
    return out
