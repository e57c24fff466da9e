"""End-to-end grasp detection on an ROI cloud: normals, antipodal sampling on
target points, collision filtering against the whole ROI (target plus
context), confidence scoring, and a deterministic sort."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..errors import NoGraspError
from ..localization.pointcloud import PROVENANCE_TARGET, PointCloud
from .collision import collides_with_points
from .gripper import GraspPose, GraspSet, GripperModel
from .normals import estimate_normals
from .sampler import GraspCandidate, sample_antipodal

_SCORE_CONE_WEIGHT = 0.7
_SCORE_WIDTH_WEIGHT = 0.3


@dataclass(frozen=True)
class GraspConfig:
    seed: int  # mandatory: detection is seeded end to end
    k_neighbors: int = 16
    friction_half_angle_deg: float = 25.0
    approach_count: int = 8
    max_pairs: int = 500


def score_candidate(candidate: GraspCandidate, gripper: GripperModel) -> float:
    """0.7 * antipodal cone margin + 0.3 * narrowness of the contact pair."""
    q = float(np.clip(candidate.quality, 0.0, 1.0))
    return _SCORE_CONE_WEIGHT * q + _SCORE_WIDTH_WEIGHT * (
        1.0 - candidate.contact_width / gripper.max_width
    )


def detect_grasps(roi: PointCloud, gripper: GripperModel, config: GraspConfig) -> GraspSet:
    """All collision-free scored candidates, best first. Ties break toward the
    smaller width, then lexicographically on (translation, rotation), so the
    output order is independent of evaluation order."""
    if len(roi) < 3:
        raise NoGraspError("ROI cloud too small for normal estimation")
    k = min(config.k_neighbors, len(roi))
    oriented = estimate_normals(roi, k=max(k, 3))
    targets = oriented.select((oriented.provenance == PROVENANCE_TARGET) & oriented.valid)
    if len(targets) < 2:
        raise NoGraspError("fewer than 2 valid target points in the ROI")

    rng = np.random.default_rng(config.seed)
    candidates = sample_antipodal(
        targets,
        gripper,
        config.friction_half_angle_deg,
        rng,
        max_pairs=config.max_pairs,
        approach_count=config.approach_count,
    )
    if not candidates:
        raise NoGraspError("no antipodal pair within the gripper stroke")

    tree = cKDTree(roi.points)
    centers = np.array([c.translation for c in candidates])
    # one conservative radius lets the neighborhood queries batch
    radius = max(gripper.reach_radius(c.width) for c in candidates)
    nearby_lists = tree.query_ball_point(centers, radius, workers=-1)
    poses = []
    for cand, nearby in zip(candidates, nearby_lists):
        pose = GraspPose(
            rotation=cand.rotation,
            translation=cand.translation,
            width=cand.width,
            approach_distance=cand.approach_distance,
            score=score_candidate(cand, gripper),
        )
        if collides_with_points(pose, roi.points[nearby], gripper):
            continue
        poses.append(pose)
    if not poses:
        raise NoGraspError("every candidate collides with the ROI cloud")
    poses.sort(key=GraspPose.sort_key)
    return GraspSet(candidates=tuple(poses), seed=config.seed)
