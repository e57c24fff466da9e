"""End-to-end grasp detection on rendered scenes: cylinder geometry, scoring,
determinism, and the wall-adjacency contrast between mask-only and expansion
ROIs."""

import numpy as np
import pytest

from conftest import VGA_INTRINSICS, overhead_camera_pose, simple_object, tabletop_scene
from partgrasp.dialogue.schema import TargetQuery
from partgrasp.errors import NoGraspError
from partgrasp.evaluation.ablation import AblationConfig, make_adjacency_case, roi_for_strategy
from partgrasp.grasping.collision import collision_check
from partgrasp.grasping.detector import GraspConfig, detect_grasps, score_candidate
from partgrasp.grasping.gripper import GripperModel
from partgrasp.grasping.sampler import GraspCandidate
from partgrasp.localization.locate import locate
from partgrasp.localization.morphology import element_for_resolution
from partgrasp.localization.pointcloud import back_project
from partgrasp.localization.segmenters import GroundTruthSegmenter
from partgrasp.scene.render import render


def cylinder_roi():
    cyl = simple_object("rod", "cylinder", (0.02, 0.12), (0.0, 0.0, 0.06), (40, 40, 200))
    scene = tabletop_scene(
        [cyl], intrinsics=VGA_INTRINSICS, camera=overhead_camera_pose(distance=0.4, elevation_deg=50.0)
    )
    frame = render(scene)
    roi = locate(frame, TargetQuery(object_name="rod"), GroundTruthSegmenter(), element_for_resolution(640, 480))
    return scene, roi


def test_isolated_cylinder_top_grasp_geometry():
    scene, roi = cylinder_roi()
    gripper = GripperModel()
    grasp_set = detect_grasps(roi, gripper, GraspConfig(seed=3))
    top = grasp_set.top
    assert not collision_check(top, roi, gripper)
    axis_cam = scene.camera_pose.rotation.T @ np.array([0.0, 0.0, 1.0])
    tilt = np.rad2deg(np.arcsin(abs(float(top.closing_axis @ axis_cam))))
    assert tilt <= 5.0
    assert 0.04 <= top.width <= 0.05


def test_detection_is_deterministic():
    _, roi = cylinder_roi()
    a = detect_grasps(roi, GripperModel(), GraspConfig(seed=11))
    b = detect_grasps(roi, GripperModel(), GraspConfig(seed=11))
    assert len(a) == len(b)
    for pa, pb in zip(a.candidates, b.candidates):
        assert pa.score == pb.score
        assert np.array_equal(pa.rotation, pb.rotation)
        assert np.array_equal(pa.translation, pb.translation)


def test_every_returned_pose_is_roi_collision_free_and_valid():
    _, roi = cylinder_roi()
    gripper = GripperModel()
    grasp_set = detect_grasps(roi, gripper, GraspConfig(seed=5))
    scores = [p.score for p in grasp_set.candidates]
    assert scores == sorted(scores, reverse=True)
    for pose in grasp_set.candidates:
        assert not collision_check(pose, roi, gripper)
        assert np.allclose(pose.rotation.T @ pose.rotation, np.eye(3), atol=1e-9)
        assert abs(np.linalg.det(pose.rotation) - 1.0) <= 1e-9
        assert 0.0 <= pose.score <= 1.0


def make_candidate(quality, contact_width, gripper):
    return GraspCandidate(
        rotation=np.eye(3),
        translation=np.zeros(3),
        contact_width=contact_width,
        width=min(contact_width + 0.002, gripper.max_width),
        approach_distance=gripper.finger_length,
        quality=quality,
        contact_a=np.array([-contact_width / 2, 0.0, 0.0]),
        contact_b=np.array([contact_width / 2, 0.0, 0.0]),
    )


def test_score_formula_and_limits():
    gripper = GripperModel()
    # perfect antipodal pair at vanishing width: both terms maximal
    assert score_candidate(make_candidate(1.0, 1e-9, gripper), gripper) == pytest.approx(1.0, abs=1e-6)
    # cone-boundary pair at full stroke: only the cone term contributes
    q = float(np.cos(np.deg2rad(10.0)))
    got = score_candidate(make_candidate(q, gripper.max_width, gripper), gripper)
    assert got == pytest.approx(0.7 * q, abs=1e-9)
    assert got == pytest.approx(0.689, abs=5e-4)


def test_score_monotonic_in_quality_at_fixed_width():
    gripper = GripperModel()
    scores = [score_candidate(make_candidate(q, 0.03, gripper), gripper) for q in np.linspace(0.9, 1.0, 11)]
    assert all(b >= a for a, b in zip(scores, scores[1:]))


def test_no_grasp_error_on_degenerate_roi():
    _, roi = cylinder_roi()
    tiny = roi.points[:2]
    from partgrasp.localization.pointcloud import PointCloud

    cloud = PointCloud(
        points=tiny, provenance=np.ones(2, dtype=np.uint8), source_pixel=np.zeros((2, 2), dtype=np.int32)
    )
    with pytest.raises(NoGraspError):
        detect_grasps(cloud, GripperModel(), GraspConfig(seed=0))


# --- wall adjacency: the reason the expansion ROI exists ---------------------

WALL_CASE_SEED = 7008  # seeded scene whose mask-only winner hits the wall


def test_mask_only_winner_collides_with_scene_but_expansion_set_is_clean():
    case = make_adjacency_case(WALL_CASE_SEED)
    config = AblationConfig(seed=0)
    frame = render(case.scene)
    full_cloud = back_project(frame.depth, frame.intrinsics)
    grasp_config = GraspConfig(
        seed=1,
        k_neighbors=config.k_neighbors,
        friction_half_angle_deg=config.friction_half_angle_deg,
        max_pairs=config.max_pairs,
    )

    mask_roi = roi_for_strategy(frame, case.query, "mask_based", config.element)
    mask_set = detect_grasps(mask_roi, config.gripper, grasp_config)
    assert collision_check(mask_set.top, full_cloud, config.gripper)

    exp_roi = roi_for_strategy(frame, case.query, "expansion", config.element)
    exp_set = detect_grasps(exp_roi, config.gripper, grasp_config)
    assert len(exp_set) > 0
    for pose in exp_set.candidates:
        assert not collision_check(pose, full_cloud, config.gripper)
