"""Pluggable 2-D segmenters. Two implementations ship: exact label lookup and
a flat-color nearest-palette heuristic; a live part-segmentation service can
implement the same protocol."""

from __future__ import annotations

from typing import Protocol

import numpy as np

from ..errors import EmptyMaskError
from ..scene.render import RgbdFrame, _norm
from .morphology import BinaryMask


class Segmenter(Protocol):
    def segment(self, frame: RgbdFrame, query) -> BinaryMask: ...


class GroundTruthSegmenter:
    """Label-raster lookup; the ideal segmenter."""

    def segment(self, frame: RgbdFrame, query) -> BinaryMask:
        from ..scene.masks import ground_truth_mask  # avoids an import cycle

        return ground_truth_mask(frame, query)


class ColorSegmenter:
    """Nearest-palette-color classification against the scene's declared part
    colors. Exact on flat-shaded scenes whose part colors are unique."""

    def __init__(self, scene):
        entries = []
        for prim in scene.background:
            entries.append((None, None, prim.color))
        for obj in scene.objects:
            for prim in obj.parts:
                entries.append((_norm(obj.name), _norm(prim.part_name), prim.color))
        entries.append((None, None, (0, 0, 0)))  # empty pixels render black
        self._entries = entries
        self._palette = np.array([c for (_, _, c) in entries], dtype=np.float64)

    def segment(self, frame: RgbdFrame, query) -> BinaryMask:
        obj = _norm(query.object_name)
        part = _norm(query.part_name) if query.part_name else None
        wanted = [
            i
            for i, (o, p, _) in enumerate(self._entries)
            if o == obj and (part is None or p == part)
        ]
        if not wanted:
            raise EmptyMaskError(
                f"no palette entry for {query.object_name!r}/{query.part_name!r}",
                query=query,
            )
        pixels = frame.color.reshape(-1, 3).astype(np.float64)
        dist = ((pixels[:, None, :] - self._palette[None, :, :]) ** 2).sum(axis=2)
        nearest = dist.argmin(axis=1).reshape(frame.color.shape[:2])
        data = np.isin(nearest, wanted).astype(np.uint8)
        if not data.any():
            raise EmptyMaskError(
                f"segmentation found no pixels for {query.object_name!r}", query=query
            )
        return BinaryMask(data)
