"""Shared scene builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from partgrasp.geometry import look_at, rotation_about_axis
from partgrasp.scene.primitives import (
    CameraIntrinsics,
    PartPrimitive,
    Pose,
    SceneDescription,
    SceneObject,
)

DEFAULT_INTRINSICS = CameraIntrinsics(width=160, height=120, fx=150.0, fy=150.0, cx=80.0, cy=60.0)
VGA_INTRINSICS = CameraIntrinsics(width=640, height=480, fx=600.0, fy=600.0, cx=320.0, cy=240.0)

_PALETTE = [
    (200, 40, 40),
    (40, 200, 40),
    (40, 40, 200),
    (200, 200, 40),
    (40, 200, 200),
    (200, 40, 200),
    (120, 80, 40),
    (230, 140, 20),
    (90, 90, 230),
    (20, 160, 90),
]


def identity_pose(x=0.0, y=0.0, z=0.0) -> Pose:
    return Pose(np.eye(3), np.array([x, y, z]))


def table_primitive(color=(90, 70, 50), half=1.5) -> PartPrimitive:
    return PartPrimitive(
        part_name="table_top",
        shape="plane",
        dimensions=(half, half),
        pose=identity_pose(),
        color=color,
    )


def overhead_camera_pose(distance=0.7, elevation_deg=50.0, azimuth_deg=0.0, target=(0.0, 0.0, 0.04)) -> Pose:
    el = np.deg2rad(elevation_deg)
    az = np.deg2rad(azimuth_deg)
    horiz = distance * np.cos(el)
    eye = np.array(
        [target[0] - horiz * np.sin(az), target[1] - horiz * np.cos(az), target[2] + distance * np.sin(el)]
    )
    return Pose(look_at(eye, np.asarray(target)), eye)


def tabletop_scene(objects, seed=0, intrinsics=DEFAULT_INTRINSICS, background_extra=(), camera=None) -> SceneDescription:
    background = (table_primitive(),) + tuple(background_extra)
    return SceneDescription(
        camera_intrinsics=intrinsics,
        camera_pose=camera or overhead_camera_pose(),
        objects=tuple(objects),
        background=background,
        seed=seed,
    )


def simple_object(name, shape, dimensions, position, color, rotation=None, part_name="body") -> SceneObject:
    pose = Pose(rotation if rotation is not None else np.eye(3), np.asarray(position, dtype=float))
    return SceneObject(
        name=name,
        parts=(
            PartPrimitive(part_name=part_name, shape=shape, dimensions=dimensions, pose=pose, color=color),
        ),
    )


def make_random_scene(seed: int, n_objects: int = 3, intrinsics=DEFAULT_INTRINSICS) -> SceneDescription:
    """Seeded tabletop scene with primitives resting on the table plane."""
    rng = np.random.default_rng(seed)
    objects = []
    for i in range(n_objects):
        kind = rng.choice(["sphere", "box", "cylinder"])
        x = float(rng.uniform(-0.18, 0.18))
        y = float(rng.uniform(-0.12, 0.12))
        color = _PALETTE[i % len(_PALETTE)]
        if kind == "sphere":
            r = float(rng.uniform(0.02, 0.045))
            obj = simple_object(f"obj{i}", "sphere", (r,), (x, y, r), color)
        elif kind == "box":
            hx, hy, hz = (float(rng.uniform(0.015, 0.05)) for _ in range(3))
            obj = simple_object(f"obj{i}", "box", (hx, hy, hz), (x, y, hz), color)
        else:
            r = float(rng.uniform(0.012, 0.03))
            h = float(rng.uniform(0.05, 0.12))
            if rng.random() < 0.5:
                obj = simple_object(f"obj{i}", "cylinder", (r, h), (x, y, h / 2), color)
            else:
                rot = rotation_about_axis(np.array([1.0, 0.0, 0.0]), np.pi / 2)
                obj = simple_object(f"obj{i}", "cylinder", (r, h), (x, y, r), color, rotation=rot)
        objects.append(obj)
    az = float(rng.uniform(-25.0, 25.0))
    el = float(rng.uniform(40.0, 60.0))
    return tabletop_scene(objects, seed=seed, intrinsics=intrinsics, camera=overhead_camera_pose(azimuth_deg=az, elevation_deg=el))


def hammer_object(position=(0.0, 0.0, 0.0), color_handle=(180, 120, 40), color_head=(90, 90, 100)) -> SceneObject:
    """Hammer lying on the table: handle cylinder along x, head box across y at
    the +x end."""
    x, y, z = position
    rot = rotation_about_axis(np.array([0.0, 1.0, 0.0]), np.pi / 2)  # cylinder axis -> x
    handle = PartPrimitive(
        part_name="handle",
        shape="cylinder",
        dimensions=(0.014, 0.22),
        pose=Pose(rot, np.array([x, y, z + 0.014])),
        color=color_handle,
    )
    head = PartPrimitive(
        part_name="head",
        shape="box",
        dimensions=(0.016, 0.045, 0.016),
        pose=Pose(np.eye(3), np.array([x + 0.125, y, z + 0.016])),
        color=color_head,
    )
    return SceneObject(name="hammer", parts=(handle, head))


@pytest.fixture
def basic_scene():
    return make_random_scene(7)
