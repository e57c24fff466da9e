"""Scene files and frame export.

Scene JSON layout (lengths in meters, rotations as 9 numbers column-major):

    {
      "seed": 7,
      "camera": {
        "intrinsics": {"width":., "height":., "fx":., "fy":., "cx":., "cy":.},
        "pose": {"rotation": [r...9], "translation": [x, y, z]}
      },
      "objects": [
        {"name": "hammer",
         "parts": [{"part_name": "handle", "shape": "cylinder",
                    "dimensions": [radius, height],
                    "pose": {...}, "color": [r, g, b]}]}
      ],
      "background": [<part primitives>]
    }

Frame export: color as 8-bit RGB PNG, depth as 16-bit single-channel PNG in
millimeters, labels as 16-bit PNG plus a JSON id table, intrinsics as a JSON
sidecar.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import SceneValidationError
from .primitives import CameraIntrinsics, PartPrimitive, Pose, SceneDescription, SceneObject
from .render import RgbdFrame


def _pose_from_dict(d: dict) -> Pose:
    try:
        rot = np.asarray(d["rotation"], dtype=np.float64).reshape(3, 3, order="F")
        trans = np.asarray(d["translation"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneValidationError(f"malformed pose: {exc}") from exc
    return Pose(rot, trans)


def _pose_to_dict(pose: Pose) -> dict:
    return {
        "rotation": [float(x) for x in np.asarray(pose.rotation).flatten(order="F")],
        "translation": [float(x) for x in pose.translation],
    }


def _primitive_from_dict(d: dict) -> PartPrimitive:
    try:
        return PartPrimitive(
            part_name=d["part_name"],
            shape=d["shape"],
            dimensions=tuple(d["dimensions"]),
            pose=_pose_from_dict(d["pose"]),
            color=tuple(d["color"]),
        )
    except KeyError as exc:
        raise SceneValidationError(f"primitive missing field {exc}") from exc


def _primitive_to_dict(p: PartPrimitive) -> dict:
    return {
        "part_name": p.part_name,
        "shape": p.shape,
        "dimensions": [float(x) for x in p.dimensions],
        "pose": _pose_to_dict(p.pose),
        "color": list(p.color),
    }


def scene_from_dict(doc: dict) -> SceneDescription:
    if not isinstance(doc, dict):
        raise SceneValidationError("scene document must be a JSON object")
    for key in ("camera", "objects", "background"):
        if key not in doc:
            raise SceneValidationError(f"scene document missing field {key!r}")
    cam = doc["camera"]
    if "intrinsics" not in cam or "pose" not in cam:
        raise SceneValidationError("camera block needs 'intrinsics' and 'pose'")
    try:
        intr = CameraIntrinsics(**cam["intrinsics"])
    except TypeError as exc:
        raise SceneValidationError(f"malformed intrinsics: {exc}") from exc
    objects = []
    for obj in doc["objects"]:
        try:
            name = obj["name"]
            parts = tuple(_primitive_from_dict(p) for p in obj["parts"])
        except KeyError as exc:
            raise SceneValidationError(f"object missing field {exc}") from exc
        objects.append(SceneObject(name=name, parts=parts))
    background = tuple(_primitive_from_dict(p) for p in doc["background"])
    return SceneDescription(
        camera_intrinsics=intr,
        camera_pose=_pose_from_dict(cam["pose"]),
        objects=tuple(objects),
        background=background,
        seed=int(doc.get("seed", 0)),
    )


def scene_to_dict(scene: SceneDescription) -> dict:
    return {
        "seed": scene.seed,
        "camera": {
            "intrinsics": {
                "width": scene.camera_intrinsics.width,
                "height": scene.camera_intrinsics.height,
                "fx": scene.camera_intrinsics.fx,
                "fy": scene.camera_intrinsics.fy,
                "cx": scene.camera_intrinsics.cx,
                "cy": scene.camera_intrinsics.cy,
            },
            "pose": _pose_to_dict(scene.camera_pose),
        },
        "objects": [
            {"name": o.name, "parts": [_primitive_to_dict(p) for p in o.parts]}
            for o in scene.objects
        ],
        "background": [_primitive_to_dict(p) for p in scene.background],
    }


def load_scene(path) -> SceneDescription:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SceneValidationError(f"scene file is not valid JSON: {exc}") from exc
    return scene_from_dict(doc)


def save_scene(scene: SceneDescription, path) -> None:
    with open(path, "w") as fh:
        json.dump(scene_to_dict(scene), fh, indent=2, sort_keys=True)
        fh.write("\n")


def color_png_bytes(frame: RgbdFrame) -> bytes:
    import io as _io

    buf = _io.BytesIO()
    Image.fromarray(np.asarray(frame.color), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


def mask_png_bytes(mask_data: np.ndarray) -> bytes:
    import io as _io

    buf = _io.BytesIO()
    img = Image.fromarray((np.asarray(mask_data) > 0).astype(np.uint8) * 255, mode="L")
    img.save(buf, format="PNG")
    return buf.getvalue()


def mask_from_png_bytes(data: bytes):
    import io as _io

    from ..localization.morphology import BinaryMask

    arr = np.asarray(Image.open(_io.BytesIO(data)).convert("L"))
    return BinaryMask((arr > 0).astype(np.uint8))


def _save_uint16_png(data: np.ndarray, path) -> None:
    Image.fromarray(np.asarray(data, dtype=np.uint16)).save(path, format="PNG")


def save_frame(frame: RgbdFrame, out_dir) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.asarray(frame.color), mode="RGB").save(out / "color.png", format="PNG")
    _save_uint16_png(frame.depth, out / "depth.png")
    _save_uint16_png(frame.part_labels, out / "labels.png")
    table = {
        str(lid): {"object": obj, "part": part}
        for lid, (obj, part) in sorted(frame.label_table.items())
    }
    with open(out / "labels.json", "w") as fh:
        json.dump(table, fh, indent=2, sort_keys=True)
        fh.write("\n")
    intr = frame.intrinsics
    with open(out / "intrinsics.json", "w") as fh:
        json.dump(
            {
                "width": intr.width,
                "height": intr.height,
                "fx": intr.fx,
                "fy": intr.fy,
                "cx": intr.cx,
                "cy": intr.cy,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")


def load_depth_png(path) -> np.ndarray:
    return np.asarray(Image.open(path), dtype=np.uint16)
