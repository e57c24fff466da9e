"""Swept-gripper collision test: two finger boxes plus the palm box in the
grasp frame, fingers opened to the commanded width plus clearance. Points
within the contact tolerance of either reconstructed contact are exempt."""

from __future__ import annotations

import numpy as np

from ..localization.pointcloud import PointCloud
from .gripper import COLLISION_CLEARANCE, CONTACT_TOLERANCE, GraspPose, GripperModel


def _points_in_gripper(grasp: GraspPose, pts: np.ndarray, gripper: GripperModel) -> np.ndarray:
    local = (pts - grasp.translation) @ grasp.rotation  # columns -> axes
    x, y, z = local[:, 0], local[:, 1], local[:, 2]
    half_open = (grasp.width + COLLISION_CLEARANCE) / 2.0
    ft, fl, pd = gripper.finger_thickness, gripper.finger_length, gripper.palm_depth

    in_y = np.abs(y) < ft / 2.0
    finger = (np.abs(x) > half_open) & (np.abs(x) < half_open + ft) & in_y & (z > -fl) & (z < 0.0)
    palm = (np.abs(x) < half_open + ft) & in_y & (z > -(fl + pd)) & (z < -fl)
    inside = finger | palm
    if inside.any():
        pa, pb = grasp.contact_points()
        near = np.minimum(
            np.linalg.norm(pts - pa, axis=1), np.linalg.norm(pts - pb, axis=1)
        ) <= CONTACT_TOLERANCE
        inside &= ~near
    return inside


def collision_check(grasp: GraspPose, cloud: PointCloud, gripper: GripperModel) -> bool:
    """True iff any cloud point (target or context) lies strictly inside the
    swept gripper volume."""
    if len(cloud) == 0:
        return False
    return bool(_points_in_gripper(grasp, cloud.points, gripper).any())


def collides_with_points(grasp: GraspPose, pts: np.ndarray, gripper: GripperModel) -> bool:
    if len(pts) == 0:
        return False
    return bool(_points_in_gripper(grasp, np.asarray(pts, dtype=np.float64), gripper).any())
