from .morphology import BinaryMask, StructuringElement, binarize, dilate, element_for_resolution
from .pointcloud import PointCloud, back_project, crop_roi, project, save_ply
from .segmenters import ColorSegmenter, GroundTruthSegmenter, Segmenter
from .locate import full_frame_mask, locate

__all__ = [
    "BinaryMask",
    "StructuringElement",
    "binarize",
    "dilate",
    "element_for_resolution",
    "PointCloud",
    "back_project",
    "crop_roi",
    "project",
    "save_ply",
    "Segmenter",
    "GroundTruthSegmenter",
    "ColorSegmenter",
    "locate",
    "full_frame_mask",
]
