from .primitives import (
    CameraIntrinsics,
    PartPrimitive,
    Pose,
    SceneDescription,
    SceneObject,
    signed_distance,
)
from .render import BACKGROUND_LABEL, EMPTY_LABEL, RgbdFrame, render

__all__ = [
    "CameraIntrinsics",
    "PartPrimitive",
    "Pose",
    "SceneDescription",
    "SceneObject",
    "signed_distance",
    "RgbdFrame",
    "render",
    "BACKGROUND_LABEL",
    "EMPTY_LABEL",
]
