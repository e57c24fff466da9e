"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`. Criteria 1-9 cover the
primary component; the operator console has its own smoke suite under
frontend/.
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import VGA_INTRINSICS, make_random_scene, overhead_camera_pose, simple_object, tabletop_scene
from partgrasp.cli import main as cli_main
from partgrasp.dialogue.schema import TargetQuery, parse_action_sequence, serialize_action_sequence
from partgrasp.errors import SequenceParseError
from partgrasp.evaluation.ablation import AblationConfig, load_suite, run_ablation, summarize
from partgrasp.evaluation.grading import grade_sequence, load_gold
from partgrasp.evaluation.metrics import InstructionRecord, compute_ig, compute_so, compute_su
from partgrasp.grasping.collision import collision_check
from partgrasp.grasping.detector import GraspConfig, detect_grasps
from partgrasp.grasping.gripper import GripperModel
from partgrasp.localization.locate import locate
from partgrasp.localization.morphology import BinaryMask, StructuringElement, dilate, element_for_resolution
from partgrasp.localization.pointcloud import back_project, project
from partgrasp.localization.segmenters import GroundTruthSegmenter
from partgrasp.scene.primitives import signed_distance
from partgrasp.scene.render import BACKGROUND_LABEL, labelled_primitives, render
from partgrasp.service.app import ServiceSettings, backend_factory
from partgrasp.sessions import SessionManager
from test_morphology import oracle_dilate, random_mask
from test_collision import make_cloud, make_grasp, oracle_collides

ROOT = Path(__file__).resolve().parents[1]
ASSETS = ROOT / "assets"


def report(num: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"\nACCEPTANCE {num} {status}: {name}{suffix}")
    assert ok, f"criterion {num} failed: {name} {suffix}"


def test_criterion_1_dilation_oracle_equivalence():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    ok = True
    for half in (1, 2, 5):  # 3x3, 5x5, 11x11
        element = StructuringElement(half, half)
        for _ in range(100):
            mask = random_mask(rng, shape=(64, 64))
            if not np.array_equal(dilate(mask, element).data, oracle_dilate(mask.data, element)):
                ok = False
    elapsed = time.perf_counter() - start
    report(1, "dilation matches brute-force max filter bit-exactly", ok and elapsed < 2.0, f"{elapsed:.2f}s")


def test_criterion_2_morphology_properties():
    rng = np.random.default_rng(99)
    s1, s2 = StructuringElement(2, 1), StructuringElement(1, 3)
    shift = (2, 3)
    ok = True
    for _ in range(100):
        a = random_mask(rng)
        b = BinaryMask(np.clip(a.data + random_mask(rng, density=0.04).data, 0, 1))
        da, db = dilate(a, s1).data, dilate(b, s1).data
        ok &= bool(np.all(da >= a.data))  # extensivity
        ok &= bool(np.all(db >= da))  # monotonicity
        rolled = BinaryMask(np.roll(np.roll(a.data, shift[0], 0), shift[1], 1))
        dr = dilate(rolled, s1).data
        h, w = a.data.shape
        r0, r1 = s1.half_height + shift[0], h - s1.half_height
        c0, c1 = s1.half_width + shift[1], w - s1.half_width
        ok &= bool(
            np.array_equal(dr[r0:r1, c0:c1], da[r0 - shift[0] : r1 - shift[0], c0 - shift[1] : c1 - shift[1]])
        )  # translation equivariance in the interior
        ok &= bool(
            np.array_equal(dilate(dilate(a, s1), s2).data, dilate(a, s1.minkowski_sum(s2)).data)
        )  # rectangular composition
    report(2, "extensivity, monotonicity, equivariance, composition", ok)


def test_criterion_3_projection_round_trip():
    max_px_err = 0.0
    max_surface_err = 0.0
    for seed in range(10):
        scene = make_random_scene(seed)
        frame = render(scene)
        cloud = back_project(frame.depth, frame.intrinsics)
        uv = project(cloud.points, frame.intrinsics)
        max_px_err = max(max_px_err, float(np.abs(uv - cloud.source_pixel).max()))
        world = scene.camera_pose.to_world_points(cloud.points)
        labels = frame.part_labels[cloud.source_pixel[:, 1], cloud.source_pixel[:, 0]]
        for label_id, _, _, prim in labelled_primitives(scene):
            sel = labels == label_id
            if not sel.any():
                continue
            if label_id == BACKGROUND_LABEL:
                d = np.min(
                    np.stack([np.abs(signed_distance(p, world[sel])) for p in scene.background]), axis=0
                )
            else:
                d = np.abs(signed_distance(prim, world[sel]))
            max_surface_err = max(max_surface_err, float(d.max()))
    ok = max_px_err <= 1e-6 and max_surface_err <= 1e-3
    report(3, "pixel round trip and on-surface back-projection", ok,
           f"px {max_px_err:.2e}, surface {max_surface_err * 1000:.3f} mm")


def test_criterion_4_metric_arithmetic():
    def rec(r, f, s, i):
        return InstructionRecord(
            instruction=f"i{i}", level="simple", r=r, f_correct=f[0], f_total=f[1], s_correct=s[0], s_total=s[1]
        )

    ok = compute_su([rec(1, (1, 1), (1, 1), i) for i in range(10)]) == 1.0
    ok &= compute_ig([rec(1, (1, 1), (2, 2), i) for i in range(8)] + [rec(1, (1, 1), (0, 2), i) for i in (8, 9)]) == pytest.approx(0.8)
    ok &= compute_so([rec(1, (0, 4), (1, 1), i) for i in range(5)]) == 0.0
    ok &= compute_so([rec(1, (2, 4), (1, 1), 0), rec(1, (4, 4), (1, 1), 1)]) == pytest.approx(0.75)
    # grading any gold set against itself is perfect across all three metrics
    records = []
    for e in load_gold(ASSETS / "gold_instructions.json"):
        r, fc, ft, sc, st = grade_sequence(e["sequence"], e["sequence"], e["substructures"])
        records.append(
            InstructionRecord(instruction=e["instruction"], level=e["level"], r=r,
                              f_correct=fc, f_total=ft, s_correct=sc, s_total=st)
        )
    ok &= (compute_su(records), compute_so(records), compute_ig(records)) == (1.0, 1.0, 1.0)
    report(4, "metric arithmetic and self-grading identity", bool(ok))


def test_criterion_5_schema_robustness():
    from test_schema import FIXTURES, MUTATIONS

    ok = len(FIXTURES) == 12
    for doc in FIXTURES:
        seq = parse_action_sequence(json.dumps(doc))
        ok &= parse_action_sequence(serialize_action_sequence(seq)) == seq
    false_accepts = 0
    wrong_codes = 0
    for mutate, code in MUTATIONS:
        for doc in FIXTURES:
            try:
                parse_action_sequence(json.dumps(mutate(doc)))
                false_accepts += 1
            except SequenceParseError as exc:
                if exc.code != code:
                    wrong_codes += 1
    ok &= false_accepts == 0 and wrong_codes == 0
    report(5, "12 fixtures round-trip; 8 mutation classes rejected", bool(ok),
           f"false accepts {false_accepts}, wrong codes {wrong_codes}")


def test_criterion_6_ablation_trend():
    suite_dir = ASSETS / "ablation_suite"
    cases = load_suite(suite_dir)
    assert len(cases) == 20
    start = time.perf_counter()
    results = run_ablation(cases, AblationConfig(seed=0))
    elapsed = time.perf_counter() - start
    summary = summarize(results)
    g, m, e = summary["global"], summary["mask_based"], summary["expansion"]
    ordering = e["success"] > m["success"] > g["success"]
    expansion_clean = e["collision"] == 0
    mask_collides = m["collision"] / m["total"] >= 0.30
    global_wrong = g["wrong_target"] / g["total"] >= 0.50
    ok = ordering and expansion_clean and mask_collides and global_wrong and elapsed < 60.0
    report(
        6,
        "ablation ordering and strategy failure modes",
        ok,
        f"success e/m/g {e['success']}/{m['success']}/{g['success']}, "
        f"mask collisions {m['collision']}/20, global wrong {g['wrong_target']}/20, {elapsed:.1f}s",
    )


def test_criterion_7_grasp_geometry():
    # isolated cylinder through the full localization + detection pipeline
    cyl = simple_object("rod", "cylinder", (0.02, 0.12), (0.0, 0.0, 0.06), (40, 40, 200))
    scene = tabletop_scene(
        [cyl], intrinsics=VGA_INTRINSICS, camera=overhead_camera_pose(distance=0.4, elevation_deg=50.0)
    )
    frame = render(scene)
    roi = locate(frame, TargetQuery(object_name="rod"), GroundTruthSegmenter(), element_for_resolution(640, 480))
    gripper = GripperModel()
    top = detect_grasps(roi, gripper, GraspConfig(seed=3)).top
    axis_cam = scene.camera_pose.rotation.T @ np.array([0.0, 0.0, 1.0])
    tilt = float(np.rad2deg(np.arcsin(abs(float(top.closing_axis @ axis_cam)))))
    geometry_ok = tilt <= 5.0 and 0.04 <= top.width <= 0.05 and not collision_check(top, roi, gripper)

    # collision check equals the scalar oracle on 1000 random points exactly
    rng = np.random.default_rng(7)
    grasp = make_grasp(width=0.04)
    pts = grasp.translation + rng.uniform(-0.09, 0.09, size=(1000, 3))
    mismatches = sum(
        collision_check(grasp, make_cloud([p]), gripper) != oracle_collides(grasp, p, gripper) for p in pts
    )
    ok = geometry_ok and mismatches == 0
    report(7, "cylinder top grasp geometry and collision oracle", ok,
           f"tilt {tilt:.2f} deg, width {top.width * 100:.2f} cm, mismatches {mismatches}")


DIALOGUES = [
    ("pen_desktop.json", "pen.txt", [("grasp", ("pen", "body"))]),
    ("hammer_desktop.json", "hammer_handover.txt", [("grasp", ("hammer", "head")), ("handover", None)]),
    ("hammer_desktop.json", "hammer_strike.txt", [("grasp", ("hammer", "handle"))]),
]


def _drive_dialogue(scene_file: str, script_file: str, seed: int = 3):
    settings = ServiceSettings(backend="mock", fixtures=str(ASSETS / "mock_replies.json"))
    manager = SessionManager(backend_factory(settings), default_seed=seed)
    from partgrasp.scene.io import load_scene, scene_to_dict

    session = manager.create_session(scene_to_dict(load_scene(ASSETS / "scenes" / scene_file)), seed=seed)
    for line in (ASSETS / "dialogues" / script_file).read_text().splitlines():
        if line.strip():
            manager.post_message(session.id, line.strip())
    while session.state in ("sequence_ready", "executing"):
        manager.execute_step(session.id)
    return manager, session


def test_criterion_8_end_to_end_dialogues():
    ok = True
    details = []
    for scene_file, script_file, expected in DIALOGUES:
        manager, session = _drive_dialogue(scene_file, script_file)
        ok &= session.state == "done"
        for (action, label), result in zip(expected, session.step_results):
            ok &= result["action"] == action
            if label is not None:
                contact_labels = {tuple(l) for l in result["grasps"]["contact_labels"]}
                ok &= contact_labels == {label}
        details.append(f"{script_file}:{session.state}")
    report(8, "three scripted dialogues reach done with expected contacts", bool(ok), ", ".join(details))


def test_criterion_9_replay_determinism(tmp_path):
    args = [
        "run",
        "--scene", str(ASSETS / "scenes" / "hammer_desktop.json"),
        "--script", str(ASSETS / "dialogues" / "hammer_handover.txt"),
        "--seed", "5",
        "--backend", "mock",
        "--fixtures", str(ASSETS / "mock_replies.json"),
    ]
    code_a = cli_main(args + ["--out", str(tmp_path / "a")])
    code_b = cli_main(args + ["--out", str(tmp_path / "b")])
    ok = code_a == 0 and code_b == 0
    files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    ok &= files_a == files_b and len(files_a) > 0
    diffs = [
        str(rel)
        for rel in files_a
        if (tmp_path / "a" / rel).read_bytes() != (tmp_path / "b" / rel).read_bytes()
    ]
    ok &= not diffs
    report(9, "recorded sessions replay to byte-identical exports", bool(ok),
           f"{len(files_a)} files" + (f", diffs: {diffs}" if diffs else ""))
