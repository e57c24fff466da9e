"""Renderer checks: hand-computed hits, the signed-distance oracle, occlusion
order, determinism, and label partition."""

import numpy as np
import pytest

from conftest import (
    DEFAULT_INTRINSICS,
    identity_pose,
    make_random_scene,
    simple_object,
    table_primitive,
    tabletop_scene,
)
from partgrasp.errors import SceneValidationError
from partgrasp.localization.pointcloud import back_project
from partgrasp.scene.primitives import (
    PartPrimitive,
    Pose,
    SceneDescription,
    SceneObject,
    signed_distance,
)
from partgrasp.scene.render import (
    BACKGROUND_LABEL,
    EMPTY_LABEL,
    RgbdFrame,
    intersect_primitive,
    labelled_primitives,
    render,
)


def _frontal_scene(objects, background):
    return SceneDescription(
        camera_intrinsics=DEFAULT_INTRINSICS,
        camera_pose=identity_pose(),
        objects=objects,
        background=background,
        seed=0,
    )


def test_plane_fills_frame_at_constant_depth():
    # Rectangle at z = 0.5 facing the camera: every pixel hits it at 500 mm.
    plane = PartPrimitive(
        part_name="wall",
        shape="plane",
        dimensions=(10.0, 10.0),
        pose=identity_pose(z=0.5),
        color=(10, 10, 10),
    )
    frame = render(_frontal_scene((), (plane,)))
    assert np.all(frame.depth == 500)
    assert np.all(frame.part_labels == BACKGROUND_LABEL)


def test_sphere_depth_at_principal_point():
    sphere = simple_object("ball", "sphere", (0.1,), (0.0, 0.0, 1.0), (200, 30, 30))
    wall = PartPrimitive(
        part_name="wall", shape="plane", dimensions=(10.0, 10.0), pose=identity_pose(z=3.0), color=(5, 5, 5)
    )
    frame = render(_frontal_scene((sphere,), (wall,)))
    v, u = int(DEFAULT_INTRINSICS.cy), int(DEFAULT_INTRINSICS.cx)
    assert frame.depth[v, u] == 900  # 1.0 - 0.1 meters
    assert frame.part_labels[v, u] == 2


def test_empty_pixels_have_zero_depth_and_vice_versa():
    sphere = simple_object("ball", "sphere", (0.05,), (0.0, 0.0, 0.8), (200, 30, 30))
    small_wall = PartPrimitive(
        part_name="wall", shape="plane", dimensions=(0.05, 0.05), pose=identity_pose(z=2.0), color=(5, 5, 5)
    )
    frame = render(_frontal_scene((sphere,), (small_wall,)))
    assert ((frame.depth == 0) == (frame.part_labels == EMPTY_LABEL)).all()
    assert (frame.part_labels == EMPTY_LABEL).any()


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_labeled_pixels_lie_on_their_primitive_surface(seed):
    # Oracle: analytic signed distance of the labelled primitive, evaluated at
    # the back-projected point, must be below 1 mm (depth is quantized to mm).
    scene = make_random_scene(seed)
    frame = render(scene)
    cloud = back_project(frame.depth, frame.intrinsics)
    world = scene.camera_pose.to_world_points(cloud.points)
    labels = frame.part_labels[cloud.source_pixel[:, 1], cloud.source_pixel[:, 0]]
    for label_id, _, _, prim in labelled_primitives(scene):
        sel = labels == label_id
        if label_id == BACKGROUND_LABEL:
            # several background primitives may share the label; take the min
            dists = np.min(
                np.stack([np.abs(signed_distance(p, world[sel])) for p in scene.background]),
                axis=0,
            )
        else:
            dists = np.abs(signed_distance(prim, world[sel]))
        assert sel.any()
        assert dists.max() <= 1e-3, f"label {label_id}: max |sdf| {dists.max():.2e}"


def test_occlusion_keeps_nearest_primitive():
    near = simple_object("near", "sphere", (0.05,), (0.0, 0.0, 0.6), (200, 0, 0))
    far = simple_object("far", "sphere", (0.2,), (0.0, 0.0, 1.5), (0, 200, 0))
    wall = PartPrimitive(
        part_name="wall", shape="plane", dimensions=(10.0, 10.0), pose=identity_pose(z=3.0), color=(5, 5, 5)
    )
    scene = _frontal_scene((near, far), (wall,))
    frame = render(scene)
    origin = scene.camera_pose.translation
    prims = labelled_primitives(scene)
    # Re-derive per-pixel winner from per-primitive ray hits.
    uu, vv = np.meshgrid(
        np.arange(DEFAULT_INTRINSICS.width, dtype=float), np.arange(DEFAULT_INTRINSICS.height, dtype=float)
    )
    dirs = np.stack(
        [
            (uu - DEFAULT_INTRINSICS.cx) / DEFAULT_INTRINSICS.fx,
            (vv - DEFAULT_INTRINSICS.cy) / DEFAULT_INTRINSICS.fy,
            np.ones_like(uu),
        ],
        axis=-1,
    )
    hits = np.stack([intersect_primitive(p, origin, dirs) for (_, _, _, p) in prims])
    covered = np.isfinite(hits).sum(axis=0) >= 2
    assert covered.any()
    winner = np.argmin(hits, axis=0)
    expected = np.array([lid for (lid, _, _, _) in prims])[winner]
    assert (frame.part_labels[covered] == expected[covered]).all()


def test_render_is_deterministic(basic_scene):
    a = render(basic_scene)
    b = render(basic_scene)
    assert np.array_equal(a.color, b.color)
    assert np.array_equal(a.depth, b.depth)
    assert np.array_equal(a.part_labels, b.part_labels)


def test_labels_partition_the_grid(basic_scene):
    frame = render(basic_scene)
    ids = set(np.unique(frame.part_labels).tolist())
    known = {EMPTY_LABEL, BACKGROUND_LABEL} | set(frame.label_table)
    assert ids <= known
    # masks per id are disjoint and cover the raster by construction of a
    # single label raster; verify the union count explicitly
    total = sum(int((frame.part_labels == i).sum()) for i in ids)
    assert total == frame.part_labels.size


def test_invalid_camera_pose_rejected():
    bad = np.eye(3)
    bad[0, 0] = 2.0
    with pytest.raises(SceneValidationError):
        Pose(bad, np.zeros(3))


def test_scene_invariants_enforced():
    with pytest.raises(SceneValidationError):
        SceneDescription(
            camera_intrinsics=DEFAULT_INTRINSICS,
            camera_pose=identity_pose(),
            objects=(),
            background=(),  # background required
        )
    dup = simple_object("a", "sphere", (0.02,), (0, 0, 0.02), (1, 2, 3))
    with pytest.raises(SceneValidationError):
        SceneDescription(
            camera_intrinsics=DEFAULT_INTRINSICS,
            camera_pose=identity_pose(),
            objects=(dup, dup),
            background=(table_primitive(),),
        )


def test_inventory_lists_visible_objects(basic_scene):
    frame = render(basic_scene)
    inv = dict(frame.inventory())
    assert set(inv) == {o.name for o in basic_scene.objects}
    for name, parts in inv.items():
        assert parts == [p.part_name for o in basic_scene.objects if o.name == name for p in o.parts]
