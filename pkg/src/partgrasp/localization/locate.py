"""Expansion-based target localization: segment, dilate, binarize,
back-project, and crop, yielding a provenance-tagged ROI cloud."""

from __future__ import annotations

import numpy as np

from ..scene.render import RgbdFrame
from .morphology import BinaryMask, StructuringElement, binarize, dilate
from .pointcloud import PointCloud, back_project, crop_roi
from .segmenters import Segmenter

DEGRADED_WARNING = "degraded_localization"
# Fraction of target-mask pixels that must carry valid depth before the
# result is flagged as degraded.
_MIN_VALID_FRACTION = 0.5


def full_frame_mask(frame: RgbdFrame) -> BinaryMask:
    return BinaryMask(np.ones(frame.depth.shape, dtype=np.uint8))


def locate(
    frame: RgbdFrame,
    query,
    segmenter: Segmenter,
    element: StructuringElement,
) -> PointCloud:
    mask = segmenter.segment(frame, query)
    expanded = binarize(dilate(mask, element))
    cloud = back_project(frame.depth, frame.intrinsics)
    roi = crop_roi(cloud, mask, expanded)
    mask_pixels = mask.count()
    valid_pixels = int(((mask.data > 0) & (np.asarray(frame.depth) > 0)).sum())
    if mask_pixels and valid_pixels < _MIN_VALID_FRACTION * mask_pixels:
        roi = roi.with_warning(DEGRADED_WARNING)
    return roi
