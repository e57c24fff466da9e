"""Localization-strategy ablation: global (no localization) versus raw-mask
cropping versus expansion-based cropping, scored by a simulated grasp-success
proxy (top pose on target and free of scene collisions).

The seeded adjacency suite places a sphere target in a walled corner with a
few millimeters of clearance plus isolated thinner distractors. Narrow
contacts score higher, so a global detector favors a distractor (wrong
target); mask-only cropping cannot see the walls, so its winning pose often
collides when re-checked against the whole scene; expansion cropping keeps
the wall geometry in the ROI and filters those poses out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..dialogue.schema import TargetQuery
from ..errors import EmptyMaskError, EmptyTargetError, NoGraspError
from ..geometry import look_at
from ..grasping.collision import collision_check
from ..grasping.detector import GraspConfig, detect_grasps
from ..grasping.gripper import GripperModel
from ..localization.locate import full_frame_mask, locate
from ..localization.morphology import StructuringElement
from ..localization.pointcloud import back_project, crop_roi
from ..localization.segmenters import GroundTruthSegmenter
from ..scene.io import load_scene, save_scene, scene_from_dict, scene_to_dict
from ..scene.primitives import (
    CameraIntrinsics,
    PartPrimitive,
    Pose,
    SceneDescription,
    SceneObject,
    signed_distance,
)
from ..scene.render import render

STRATEGIES = ("global", "mask_based", "expansion")
OUTCOMES = ("success", "wrong_target", "collision", "no_grasp")

# Top pose counts as on-target while its center stays within this inflation
# of the target part's primitive.
TARGET_INFLATION = 0.01

SUITE_INTRINSICS = CameraIntrinsics(width=320, height=240, fx=300.0, fy=300.0, cx=160.0, cy=120.0)


@dataclass(frozen=True)
class AblationCase:
    scene_id: str
    scene: SceneDescription
    query: TargetQuery


@dataclass(frozen=True)
class AblationResult:
    strategy: str
    scene_id: str
    query: TargetQuery
    outcome: str

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "scene_id": self.scene_id,
            "query": {"object": self.query.object_name, "part": self.query.part_name},
            "outcome": self.outcome,
        }


@dataclass(frozen=True)
class AblationConfig:
    seed: int = 0
    # ring must cover the gripper's collision footprint around the target in
    # pixel terms, not just mask edge noise
    element: StructuringElement = field(default_factory=lambda: StructuringElement(22, 22))
    gripper: GripperModel = field(default_factory=GripperModel)
    k_neighbors: int = 10
    friction_half_angle_deg: float = 25.0
    approach_count: int = 8
    max_pairs: int = 250


# --- adjacency suite ---------------------------------------------------------

def _upright(part_name, shape, dims, x, y, z, color):
    return PartPrimitive(part_name=part_name, shape=shape, dimensions=dims, pose=Pose(np.eye(3), np.array([x, y, z])), color=color)


def make_adjacency_case(seed: int, intrinsics: CameraIntrinsics = SUITE_INTRINSICS) -> AblationCase:
    """One adjacency scene: apple a few millimeters east of a tall wall, plus
    isolated thinner distractors on the open side."""
    rng = np.random.default_rng(seed)
    gap = float(rng.uniform(0.002, 0.003))
    r_apple = float(rng.uniform(0.030, 0.036))
    ax = float(rng.uniform(-0.02, 0.02))
    ay = float(rng.uniform(0.02, 0.06))
    wall_h = float(rng.uniform(0.10, 0.13))
    wall_t = 0.03  # thick enough that the far face never shows antipodal pairs

    apple = SceneObject(
        name="apple", parts=(_upright("body", "sphere", (r_apple,), ax, ay, r_apple, (200, 40, 40)),)
    )
    west_face_x = ax - r_apple - gap  # wall face toward +x, hugging the apple
    west_wall = _upright(
        "west_wall", "box", (wall_t / 2, 0.18, wall_h / 2),
        west_face_x - wall_t / 2, ay + 0.01, wall_h / 2, (150, 150, 150),
    )
    # second wall behind the apple widens the directions a mask-only crop
    # cannot see; its south face stays visible from the camera
    north_face_y = ay + r_apple + gap
    north_wall = _upright(
        "north_wall", "box", (0.18, wall_t / 2, wall_h / 2),
        ax + 0.06, north_face_y + wall_t / 2, wall_h / 2, (120, 130, 140),
    )
    table = _upright("table_top", "plane", (0.4, 0.4), 0.0, 0.0, 0.0, (90, 70, 50))

    # isolated distractors on the open (south-east) side; thinner than the
    # apple, so a global detector prefers them
    tx = float(rng.uniform(0.10, 0.16))
    ty = float(rng.uniform(-0.06, 0.00))
    r_tape = float(rng.uniform(0.022, 0.026))
    tape = SceneObject(
        name="tape", parts=(_upright("body", "cylinder", (r_tape, 0.05), tx, ty, 0.025, (40, 80, 220)),)
    )
    bx = float(rng.uniform(-0.02, 0.04))
    by = float(rng.uniform(-0.16, -0.10))
    r_ball = float(rng.uniform(0.022, 0.026))
    ball = SceneObject(name="ball", parts=(_upright("body", "sphere", (r_ball,), bx, by, r_ball, (60, 200, 80)),))
    kx = float(rng.uniform(0.12, 0.18))
    ky = float(rng.uniform(-0.16, -0.11))
    half_k = float(rng.uniform(0.018, 0.022))
    block = SceneObject(
        name="block", parts=(_upright("body", "box", (half_k, half_k, 0.02), kx, ky, 0.02, (220, 180, 40)),)
    )

    az = float(rng.uniform(-32.0, -18.0))
    el = float(rng.uniform(48.0, 62.0))
    dist = float(rng.uniform(0.52, 0.62))
    target = np.array([ax + 0.03, ay - 0.05, 0.03])
    elr, azr = np.deg2rad(el), np.deg2rad(az)
    eye = target + np.array(
        [-dist * np.cos(elr) * np.sin(azr), -dist * np.cos(elr) * np.cos(azr), dist * np.sin(elr)]
    )
    camera = Pose(look_at(eye, target), eye)

    scene = SceneDescription(
        camera_intrinsics=intrinsics,
        camera_pose=camera,
        objects=(apple, tape, ball, block),
        background=(table, west_wall, north_wall),
        seed=seed,
    )
    return AblationCase(scene_id=f"adjacency_{seed:04d}", scene=scene, query=TargetQuery(object_name="apple"))


def make_adjacency_suite(seed: int, count: int = 20) -> list:
    return [make_adjacency_case(seed * 1000 + i) for i in range(count)]


# --- running -----------------------------------------------------------------

def roi_for_strategy(frame, query, strategy: str, element: StructuringElement):
    segmenter = GroundTruthSegmenter()
    if strategy == "expansion":
        return locate(frame, query, segmenter, element)
    cloud = back_project(frame.depth, frame.intrinsics)
    if strategy == "global":
        full = full_frame_mask(frame)
        return crop_roi(cloud, full, full)
    if strategy == "mask_based":
        mask = segmenter.segment(frame, query)
        return crop_roi(cloud, mask, mask)
    raise ValueError(f"unknown strategy {strategy!r}")


def _target_primitives(scene: SceneDescription, query: TargetQuery):
    for obj in scene.objects:
        if obj.name.strip().lower() == query.normalized_object:
            if query.part_name is None:
                return list(obj.parts)
            return [p for p in obj.parts if p.part_name.strip().lower() == query.normalized_part]
    return []


def classify_outcome(top_pose, case: AblationCase, full_cloud, gripper: GripperModel) -> str:
    world_center = case.scene.camera_pose.to_world_points(top_pose.translation.reshape(1, 3))[0]
    prims = _target_primitives(case.scene, case.query)
    on_target = any(float(signed_distance(p, world_center)[0]) <= TARGET_INFLATION for p in prims)
    if not on_target:
        return "wrong_target"
    if collision_check(top_pose, full_cloud, gripper):
        return "collision"
    return "success"


def run_ablation(cases, config: AblationConfig, strategies=STRATEGIES):
    """One AblationResult per (scene, strategy); deterministic for a fixed
    suite and config."""
    results = []
    for case_index, case in enumerate(cases):
        frame = render(case.scene)
        full_cloud = back_project(frame.depth, frame.intrinsics)
        for s_index, strategy in enumerate(strategies):
            grasp_config = GraspConfig(
                seed=config.seed * 65536 + case_index * 16 + s_index,
                k_neighbors=config.k_neighbors,
                friction_half_angle_deg=config.friction_half_angle_deg,
                approach_count=config.approach_count,
                max_pairs=config.max_pairs,
            )
            try:
                roi = roi_for_strategy(frame, case.query, strategy, config.element)
                grasp_set = detect_grasps(roi, config.gripper, grasp_config)
            except (EmptyMaskError, EmptyTargetError, NoGraspError):
                outcome = "no_grasp"
            else:
                outcome = classify_outcome(grasp_set.top, case, full_cloud, config.gripper)
            results.append(
                AblationResult(strategy=strategy, scene_id=case.scene_id, query=case.query, outcome=outcome)
            )
    return results


def summarize(results) -> dict:
    summary = {}
    for res in results:
        row = summary.setdefault(
            res.strategy, {"total": 0, "success_rate": 0.0, **{o: 0 for o in OUTCOMES}}
        )
        row["total"] += 1
        row[res.outcome] += 1
    for row in summary.values():
        row["success_rate"] = row["success"] / row["total"] if row["total"] else 0.0
    return summary


def summary_to_text(summary: dict) -> str:
    header = f"{'strategy':<12}{'success':>9}{'wrong':>7}{'collide':>9}{'no_grasp':>10}{'rate':>8}"
    lines = [header, "-" * len(header)]
    for strategy in STRATEGIES:
        if strategy not in summary:
            continue
        row = summary[strategy]
        lines.append(
            f"{strategy:<12}{row['success']:>6}/{row['total']:<3}{row['wrong_target']:>6}"
            f"{row['collision']:>9}{row['no_grasp']:>10}{row['success_rate'] * 100:>7.1f}%"
        )
    return "\n".join(lines)


# --- suite files -------------------------------------------------------------

def save_suite(cases, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for case in cases:
        scene_file = f"{case.scene_id}.json"
        save_scene(case.scene, out / scene_file)
        manifest.append(
            {
                "scene_id": case.scene_id,
                "scene_file": scene_file,
                "query": {"object": case.query.object_name, "part": case.query.part_name},
            }
        )
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_suite(suite_dir) -> list:
    suite = Path(suite_dir)
    with open(suite / "manifest.json") as fh:
        manifest = json.load(fh)
    cases = []
    for entry in manifest:
        scene = load_scene(suite / entry["scene_file"])
        query = TargetQuery(object_name=entry["query"]["object"], part_name=entry["query"].get("part"))
        cases.append(AblationCase(scene_id=entry["scene_id"], scene=scene, query=query))
    return cases
