"""Motion-blob extraction: connected components and per-frame candidate box scoring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .flow import BinaryMask
from .geometry import Box

_EIGHT_CONNECTED = np.ones((3, 3), dtype=int)

# Components smaller than this fraction of the frame are speckle; components
# spanning more than max_span_frac of either dimension look like camera motion.
DEFAULT_MIN_AREA_FRAC = 0.001
DEFAULT_MAX_SPAN_FRAC = 0.9
DEFAULT_MAX_DENSITY = 0.5


@dataclass(frozen=True)
class Region:
    """One 8-connected true-pixel region of a mask."""

    area: int          # pixel count
    box: Box           # circumscribed rectangle in pixel-boundary coordinates
    first_pixel: int   # row-major index of the first pixel (frame-scan order)


def connected_components(mask: BinaryMask) -> list[Region]:
    """Maximal 8-connected regions with their bounding rectangles, in scan order."""
    labels, count = ndimage.label(mask.data, structure=_EIGHT_CONNECTED)
    if count == 0:
        return []
    areas = np.bincount(labels.ravel(), minlength=count + 1)
    values, first = np.unique(labels.ravel(), return_index=True)
    first_by_label = dict(zip(values.tolist(), first.tolist()))
    regions = []
    for label, slices in enumerate(ndimage.find_objects(labels), start=1):
        rows, cols = slices
        regions.append(Region(
            area=int(areas[label]),
            box=Box(float(cols.start), float(rows.start), float(cols.stop), float(rows.stop)),
            first_pixel=first_by_label[label],
        ))
    regions.sort(key=lambda r: r.first_pixel)
    return regions


def score_box(box: Box, width: int, height: int, beta: float) -> float:
    """Candidate quality: rectangle area plus beta-weighted border-margin product."""
    margin = min(box.x0, width - box.x1) * min(box.y0, height - box.y1)
    return box.area + beta * margin


def candidate_box(mask: BinaryMask, beta: float, *,
                  min_area_frac: float = DEFAULT_MIN_AREA_FRAC,
                  max_span_frac: float = DEFAULT_MAX_SPAN_FRAC,
                  max_density: float = DEFAULT_MAX_DENSITY) -> tuple[Box, float] | None:
    """Best-scoring component rectangle of a motion mask, or None.

    Degenerate masks (empty, or denser than max_density: no motion contrast)
    yield no candidate, as do frames where every component is filtered out.
    Ties are broken by larger rectangle area, then earlier frame-scan order.
    """
    if beta < 0.0:
        raise ValueError("beta must be non-negative")
    density = mask.density
    if density == 0.0 or density > max_density:
        return None
    w, h = mask.width, mask.height
    min_area = min_area_frac * w * h
    best: tuple[float, float, int, Box] | None = None
    for region in connected_components(mask):
        if region.area < min_area:
            continue
        if region.box.width > max_span_frac * w or region.box.height > max_span_frac * h:
            continue
        score = score_box(region.box, w, h, beta)
        key = (score, region.box.area, -region.first_pixel)
        if best is None or key > (best[0], best[1], -best[2]):
            best = (score, region.box.area, region.first_pixel, region.box)
    if best is None:
        return None
    return best[3], best[0]
