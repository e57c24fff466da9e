"""Interactive sessions: one rendered scene plus a dialogue, stepping through
the inferred action sequence with localization and grasp detection.

State machine: dialogue -> sequence_ready -> executing -> done | failed.
Operations outside their states raise SessionStateError. Mutations are
serialized per session; snapshot reads are lock-free.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .dialogue.history import DialogueHistory, EnvironmentContext
from .dialogue.inference import chat, infer_action_sequence, is_confirmation
from .dialogue.schema import ActionSequence, sequence_to_dict, step_to_dict, target_to_dict
from .errors import EmptyMaskError, EmptyTargetError, NoGraspError, PartGraspError, SessionStateError
from .grasping.detector import GraspConfig, detect_grasps
from .grasping.gripper import GripperModel
from .localization.locate import DEGRADED_WARNING, locate
from .localization.morphology import binarize, dilate, element_for_resolution
from .localization.pointcloud import PROVENANCE_TARGET, back_project, crop_roi, project, save_ply
from .localization.segmenters import GroundTruthSegmenter
from .scene.io import mask_png_bytes, save_frame, scene_from_dict
from .scene.render import render

STATES = ("dialogue", "sequence_ready", "executing", "done", "failed")


@dataclass
class StepArtifacts:
    """Raster/cloud artifacts kept server-side for the mask and grasp
    endpoints; not part of the JSON step result."""

    target_mask: np.ndarray | None = None
    expanded_mask: np.ndarray | None = None
    grasp_dicts: list | None = None
    roi_cloud: object = None


@dataclass
class Session:
    id: str
    scene: object
    frame: object
    env: EnvironmentContext
    history: DialogueHistory
    backend: object
    element: object
    gripper: GripperModel
    grasp_seed: int
    state: str = "dialogue"
    sequence: ActionSequence | None = None
    cursor: int = 0
    step_results: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionManager:
    """Owns sessions; every mutating call goes through the session lock."""

    def __init__(
        self,
        backend_factory,
        gripper: GripperModel | None = None,
        default_seed: int = 0,
        element=None,
    ):
        self._backend_factory = backend_factory
        self._gripper = gripper or GripperModel()
        self._default_seed = default_seed
        self._element = element  # None -> scale with the scene resolution
        self._sessions = {}

    def create_session(self, scene_doc: dict, seed: int | None = None) -> Session:
        scene = scene_from_dict(scene_doc)
        frame = render(scene)
        intr = scene.camera_intrinsics
        session = Session(
            id=uuid.uuid4().hex,
            scene=scene,
            frame=frame,
            env=EnvironmentContext.from_frame(frame),
            history=DialogueHistory(session_id="session"),
            backend=self._backend_factory(),
            element=self._element or element_for_resolution(intr.width, intr.height),
            gripper=self._gripper,
            grasp_seed=self._default_seed if seed is None else seed,
        )
        self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise KeyError(f"unknown session {session_id!r}") from None

    def post_message(self, session_id: str, text: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            if session.state != "dialogue":
                raise SessionStateError(f"messages only accepted in dialogue state, not {session.state!r}")
            if is_confirmation(text):
                sequence = infer_action_sequence(session.backend, session.env, session.history, text)
                session.sequence = sequence
                session.state = "sequence_ready"
                return {"sequence": sequence_to_dict(sequence)}
            reply = chat(session.backend, session.env, session.history, text)
            return {"reply": reply}

    def execute_step(self, session_id: str) -> dict:
        session = self.get(session_id)
        with session.lock:
            if session.state not in ("sequence_ready", "executing"):
                raise SessionStateError(f"cannot execute steps in state {session.state!r}")
            if session.cursor >= len(session.sequence):
                raise SessionStateError("sequence already exhausted")
            step = session.sequence.steps[session.cursor]
            session.state = "executing"
            artifacts = StepArtifacts()
            result = {"index": step.index, "action": step.action, "target": target_to_dict(step.target)}
            try:
                if step.action in ("detect", "grasp"):
                    result["roi"] = self._run_localization(session, step, artifacts)
                if step.action == "grasp":
                    result["grasps"] = self._run_grasp_detection(session, step, artifacts)
                if step.action in ("place", "handover"):
                    result["annotation"] = self._annotate(session, step)
            except (EmptyMaskError, EmptyTargetError, NoGraspError) as exc:
                result["failure"] = {"code": exc.code, "message": str(exc)}
                session.state = "failed"
                session.step_results.append(result)
                session.artifacts[step.index] = artifacts
                return result
            session.step_results.append(result)
            session.artifacts[step.index] = artifacts
            session.cursor += 1
            if session.cursor == len(session.sequence):
                session.state = "done"
            return result

    # --- step internals ------------------------------------------------------

    def _run_localization(self, session: Session, step, artifacts: StepArtifacts) -> dict:
        segmenter = GroundTruthSegmenter()
        mask = segmenter.segment(session.frame, step.target)
        expanded = binarize(dilate(mask, session.element))
        cloud = back_project(session.frame.depth, session.frame.intrinsics)
        roi = crop_roi(cloud, mask, expanded)
        depth_valid = np.asarray(session.frame.depth) > 0
        valid_pixels = int((mask.data.astype(bool) & depth_valid).sum())
        degraded = bool(mask.count() and valid_pixels < 0.5 * mask.count())
        if degraded:
            roi = roi.with_warning(DEGRADED_WARNING)
        artifacts.target_mask = mask.data
        artifacts.expanded_mask = expanded.data
        artifacts.roi_cloud = roi
        return {
            "target_points": int(len(roi.target_indices)),
            "context_points": int(len(roi.context_indices)),
            "mask_pixels": int(mask.count()),
            "expanded_pixels": int(expanded.count()),
            "degraded": degraded,
        }

    def _run_grasp_detection(self, session: Session, step, artifacts: StepArtifacts) -> dict:
        roi = artifacts.roi_cloud
        config = GraspConfig(seed=session.grasp_seed + step.index)
        grasp_set = detect_grasps(roi, session.gripper, config)
        intr = session.frame.intrinsics
        dicts = []
        for pose in grasp_set.candidates:
            d = pose.to_dict()
            d["projected_pixel"] = [float(x) for x in project(pose.translation, intr)[0]]
            dicts.append(d)
        artifacts.grasp_dicts = dicts
        top = grasp_set.top
        return {
            "count": len(grasp_set),
            "top": dicts[0],
            "contact_labels": self._contact_labels(session, roi, top),
        }

    def _contact_labels(self, session: Session, roi, pose) -> list:
        targets = roi.points[roi.provenance == PROVENANCE_TARGET]
        pixels = roi.source_pixel[roi.provenance == PROVENANCE_TARGET]
        tree = cKDTree(targets)
        labels = []
        for contact in pose.contact_points():
            _, idx = tree.query(contact)
            u, v = pixels[idx]
            label_id = int(session.frame.part_labels[v, u])
            obj, part = session.frame.label_table.get(label_id, ("", ""))
            labels.append([obj, part])
        return labels

    def _annotate(self, session: Session, step) -> dict:
        annotation = {"note": f"{step.action} simulated; no motion execution"}
        if "destination" in step.params:
            annotation["destination"] = target_to_dict(step.params["destination"])
        obj = step.target.normalized_object
        for result in reversed(session.step_results):
            if result["action"] == "grasp" and "grasps" in result:
                grasped = result["target"]["object"].strip().lower()
                if grasped == obj:
                    annotation["grasp_translation"] = result["grasps"]["top"]["translation"]
                    break
        return annotation

    # --- snapshots and export --------------------------------------------------

    def snapshot(self, session_id: str) -> dict:
        session = self.get(session_id)
        intr = session.frame.intrinsics
        out = {
            "session_id": session.id,
            "state": session.state,
            "cursor": session.cursor,
            "intrinsics": {
                "width": intr.width,
                "height": intr.height,
                "fx": intr.fx,
                "fy": intr.fy,
                "cx": intr.cx,
                "cy": intr.cy,
            },
            "inventory": [[name, list(parts)] for name, parts in session.env.object_inventory],
            "transcript": [{"user": t.user, "reply": t.reply} for t in session.history.turns],
            "steps": list(session.step_results),
        }
        if session.sequence is not None:
            out["sequence"] = sequence_to_dict(session.sequence)
        return out

    def mask_png(self, session_id: str, step_index: int, kind: str = "target") -> bytes:
        session = self.get(session_id)
        artifacts = session.artifacts.get(step_index)
        if artifacts is None:
            raise KeyError(f"no artifacts for step {step_index}")
        data = artifacts.target_mask if kind == "target" else artifacts.expanded_mask
        if data is None:
            raise KeyError(f"step {step_index} recorded no {kind} mask")
        return mask_png_bytes(data)

    def grasps_json(self, session_id: str, step_index: int, top_n: int | None = None) -> list:
        session = self.get(session_id)
        artifacts = session.artifacts.get(step_index)
        if artifacts is None or artifacts.grasp_dicts is None:
            raise KeyError(f"no grasp set recorded for step {step_index}")
        dicts = artifacts.grasp_dicts
        return dicts if top_n is None else dicts[:top_n]


def _dump_json(doc, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def export_session(manager: SessionManager, session_id: str, out_dir, top_n: int | None = None) -> None:
    """Write the replayable record of a session: transcript, sequence, per-step
    results, masks, grasp sets (optionally only the top_n per step), ROI
    clouds, and the rendered frame. Contents are a pure function of
    (scene, script, seed); ids and clocks never appear.
    """
    session = manager.get(session_id)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    snap = manager.snapshot(session_id)
    _dump_json({"state": snap["state"], "transcript": snap["transcript"]}, out / "transcript.json")
    if "sequence" in snap:
        _dump_json(snap["sequence"], out / "sequence.json")
    save_frame(session.frame, out / "frame")
    steps_dir = out / "steps"
    steps_dir.mkdir(exist_ok=True)
    for result in snap["steps"]:
        index = result["index"]
        _dump_json(result, steps_dir / f"step_{index:02d}.json")
        artifacts = session.artifacts.get(index)
        if artifacts is None:
            continue
        if artifacts.target_mask is not None:
            (steps_dir / f"step_{index:02d}_mask_target.png").write_bytes(
                mask_png_bytes(artifacts.target_mask)
            )
            (steps_dir / f"step_{index:02d}_mask_expanded.png").write_bytes(
                mask_png_bytes(artifacts.expanded_mask)
            )
        if artifacts.grasp_dicts is not None:
            dicts = artifacts.grasp_dicts if top_n is None else artifacts.grasp_dicts[:top_n]
            _dump_json(dicts, steps_dir / f"step_{index:02d}_grasps.json")
        if artifacts.roi_cloud is not None:
            save_ply(artifacts.roi_cloud, steps_dir / f"step_{index:02d}_roi.ply")
