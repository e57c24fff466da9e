"""Ground-truth segmentation from the label raster: the ideal stand-in for a
learned 2-D part-segmentation model."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyMaskError
from ..localization.morphology import BinaryMask
from .render import RgbdFrame


def ground_truth_mask(frame: RgbdFrame, query) -> BinaryMask:
    """Mask of pixels whose label matches ``query`` (whole object when the
    query has no part). Raises EmptyMaskError when nothing matches."""
    ids = frame.part_ids(query.object_name, query.part_name)
    if not ids:
        raise EmptyMaskError(
            f"no (object, part) matching {query.object_name!r}/{query.part_name!r}",
            query=query,
        )
    data = np.isin(frame.part_labels, ids).astype(np.uint8)
    if not data.any():
        raise EmptyMaskError(
            f"target {query.object_name!r}/{query.part_name!r} has no visible pixels",
            query=query,
        )
    return BinaryMask(data)
