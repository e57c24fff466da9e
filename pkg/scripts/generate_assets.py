#!/usr/bin/env python3
"""Regenerate the committed scene and suite assets (deterministic)."""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from partgrasp.evaluation.ablation import make_adjacency_suite, save_suite
from partgrasp.geometry import look_at, rotation_about_axis
from partgrasp.scene.io import save_scene
from partgrasp.scene.primitives import (
    CameraIntrinsics,
    PartPrimitive,
    Pose,
    SceneDescription,
    SceneObject,
)

HD = CameraIntrinsics(width=1280, height=720, fx=900.0, fy=900.0, cx=640.0, cy=360.0)


def pose(x=0.0, y=0.0, z=0.0, rotation=None):
    return Pose(np.eye(3) if rotation is None else rotation, np.array([x, y, z]))


def camera(distance, elevation_deg, azimuth_deg, target=(0.0, 0.0, 0.03)):
    el, az = np.deg2rad(elevation_deg), np.deg2rad(azimuth_deg)
    target = np.asarray(target)
    eye = target + np.array(
        [-distance * np.cos(el) * np.sin(az), -distance * np.cos(el) * np.cos(az), distance * np.sin(el)]
    )
    return Pose(look_at(eye, target), eye)


def table(half=0.5):
    return PartPrimitive(
        part_name="table_top", shape="plane", dimensions=(half, half), pose=pose(), color=(96, 72, 48)
    )


ROT_Y90 = rotation_about_axis(np.array([0.0, 1.0, 0.0]), np.pi / 2)  # cylinder axis -> x
ROT_X90 = rotation_about_axis(np.array([1.0, 0.0, 0.0]), np.pi / 2)  # cylinder axis -> y


def pen(x=0.0, y=0.02):
    return SceneObject(
        name="pen",
        parts=(
            PartPrimitive(
                part_name="body",
                shape="cylinder",
                dimensions=(0.006, 0.14),
                pose=pose(x, y, 0.006, ROT_Y90),
                color=(40, 80, 220),
            ),
        ),
    )


def mug(x=0.14, y=-0.06):
    return SceneObject(
        name="mug",
        parts=(
            PartPrimitive(
                part_name="body",
                shape="cylinder",
                dimensions=(0.035, 0.09),
                pose=pose(x, y, 0.045),
                color=(200, 200, 60),
            ),
        ),
    )


def hammer(x=-0.03, y=0.0):
    # mallet-style: handle along x, cylindrical head across y at the +x end
    handle = PartPrimitive(
        part_name="handle",
        shape="cylinder",
        dimensions=(0.014, 0.22),
        pose=pose(x, y, 0.014, ROT_Y90),
        color=(180, 120, 40),
    )
    head = PartPrimitive(
        part_name="head",
        shape="cylinder",
        dimensions=(0.016, 0.09),
        pose=pose(x + 0.125, y, 0.016, ROT_X90),
        color=(90, 90, 110),
    )
    return SceneObject(name="hammer", parts=(handle, head))


def apple(x=-0.15, y=-0.08):
    return SceneObject(
        name="apple",
        parts=(
            PartPrimitive(
                part_name="body", shape="sphere", dimensions=(0.035,), pose=pose(x, y, 0.035), color=(200, 40, 40)
            ),
        ),
    )


def main() -> None:
    scenes = ROOT / "assets" / "scenes"
    scenes.mkdir(parents=True, exist_ok=True)

    pen_scene = SceneDescription(
        camera_intrinsics=HD,
        camera_pose=camera(0.45, 52.0, 8.0),
        objects=(pen(), mug()),
        background=(table(),),
        seed=11,
    )
    save_scene(pen_scene, scenes / "pen_desktop.json")

    hammer_scene = SceneDescription(
        camera_intrinsics=HD,
        camera_pose=camera(0.50, 54.0, -6.0),
        objects=(hammer(), mug(0.16, 0.10), apple()),
        background=(table(),),
        seed=12,
    )
    save_scene(hammer_scene, scenes / "hammer_desktop.json")

    suite_dir = ROOT / "assets" / "ablation_suite"
    save_suite(make_adjacency_suite(seed=7, count=20), suite_dir)
    print("assets written")


if __name__ == "__main__":
    main()
