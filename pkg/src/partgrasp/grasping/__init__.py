from .gripper import GraspPose, GraspSet, GripperModel, OPEN_CLEARANCE
from .normals import OrientedPointSet, estimate_normals
from .sampler import GraspCandidate, sample_antipodal
from .collision import collision_check
from .detector import GraspConfig, detect_grasps, score_candidate

__all__ = [
    "GripperModel",
    "GraspPose",
    "GraspSet",
    "OPEN_CLEARANCE",
    "OrientedPointSet",
    "estimate_normals",
    "GraspCandidate",
    "sample_antipodal",
    "collision_check",
    "GraspConfig",
    "detect_grasps",
    "score_candidate",
]
