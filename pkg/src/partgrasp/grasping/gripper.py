"""Two-finger gripper model and 6-DoF grasp poses.

Grasp frame convention: rotation columns are [closing axis, finger axis,
approach axis]; the approach axis is the gripper's travel direction (from the
camera side into the scene), so the body occupies the negative-approach side
of the grasp center with fingertips at the contact plane.

``width`` is the commanded opening: contact distance plus OPEN_CLEARANCE,
capped at the gripper's maximum. Confidence scoring uses the underlying
contact distance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import freeze, is_rotation

# Opening clearance added over the contact distance when closing on a pair.
OPEN_CLEARANCE = 0.002
# Extra clearance applied by the collision check on top of the stored width.
COLLISION_CLEARANCE = 0.002
# Points this close to a reconstructed contact are exempt from collision.
CONTACT_TOLERANCE = 0.001


@dataclass(frozen=True)
class GripperModel:
    max_width: float = 0.085
    finger_length: float = 0.04
    finger_thickness: float = 0.01
    palm_depth: float = 0.02

    def __post_init__(self):
        if min(self.max_width, self.finger_length, self.finger_thickness, self.palm_depth) <= 0:
            raise ValueError("all gripper dimensions must be positive")

    def reach_radius(self, width: float) -> float:
        """Radius of a sphere around the grasp center bounding the swept
        collision volume (used only as a conservative prefilter)."""
        half_x = width / 2.0 + COLLISION_CLEARANCE + self.finger_thickness
        return float(
            np.sqrt(half_x**2 + (self.finger_thickness / 2.0) ** 2 + (self.finger_length + self.palm_depth) ** 2)
            + CONTACT_TOLERANCE
        )


@dataclass(frozen=True)
class GraspPose:
    rotation: np.ndarray  # (3, 3), columns = closing / finger / approach axes
    translation: np.ndarray  # (3,) grasp center, meters
    width: float
    approach_distance: float
    score: float

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=np.float64)
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        if not is_rotation(r):
            raise ValueError("grasp rotation must be orthonormal with det +1")
        if self.width <= 0:
            raise ValueError("grasp width must be positive")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError("score must lie in [0, 1]")
        object.__setattr__(self, "rotation", freeze(r))
        object.__setattr__(self, "translation", freeze(t))

    @property
    def closing_axis(self) -> np.ndarray:
        return self.rotation[:, 0]

    @property
    def finger_axis(self) -> np.ndarray:
        return self.rotation[:, 1]

    @property
    def approach_axis(self) -> np.ndarray:
        return self.rotation[:, 2]

    def contact_points(self) -> tuple:
        """Contacts reconstructed from the stored width (the opening minus the
        closing clearance), on the closing axis through the center."""
        half = max(self.width - OPEN_CLEARANCE, 1e-6) / 2.0
        return (
            self.translation - half * self.closing_axis,
            self.translation + half * self.closing_axis,
        )

    def to_dict(self) -> dict:
        return {
            "rotation": [float(x) for x in np.asarray(self.rotation).flatten(order="C")],
            "translation": [float(x) for x in self.translation],
            "width": float(self.width),
            "approach_distance": float(self.approach_distance),
            "score": float(self.score),
        }

    def sort_key(self) -> tuple:
        return (
            -self.score,
            self.width,
            tuple(float(x) for x in self.translation),
            tuple(float(x) for x in np.asarray(self.rotation).flatten(order="C")),
        )


@dataclass(frozen=True)
class GraspSet:
    candidates: tuple
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        scores = [c.score for c in self.candidates]
        if scores != sorted(scores, reverse=True):
            raise ValueError("grasp set must be sorted by descending score")

    def __len__(self) -> int:
        return len(self.candidates)

    @property
    def top(self) -> GraspPose:
        return self.candidates[0]

    def to_dicts(self, top_n: int | None = None) -> list:
        sel = self.candidates if top_n is None else self.candidates[:top_n]
        return [c.to_dict() for c in sel]
