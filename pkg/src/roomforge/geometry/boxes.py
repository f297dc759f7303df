"""Volumetric IoU of z-up yaw boxes via convex footprint clipping."""

from __future__ import annotations

import numpy as np

from roomforge.geometry.polygon import Polygon2D, clip_convex, polygon_area
from roomforge.geometry.transforms import rot_z
from roomforge.scene.model import OrientedBox

_FOOTPRINT_SIGNS = np.array([[-1, -1], [+1, -1], [+1, +1], [-1, +1]], dtype=float)


def footprint_polygon(box: OrientedBox) -> Polygon2D:
    """The box's z-projection: a CCW rectangle of (size.x, size.y) rotated by
    yaw about center.xy."""
    local = _FOOTPRINT_SIGNS * (box.size[:2] / 2.0)
    r = rot_z(box.yaw)[:2, :2]
    return Polygon2D(box.center[:2] + local @ r.T)


def box_iou(a: OrientedBox, b: OrientedBox) -> float:
    """Intersection-over-union of two yaw-only boxes.

    Both boxes are z-up, so the intersection volume factors exactly into
    (footprint polygon intersection area) x (vertical interval overlap).
    """
    dz = min(a.top, b.top) - max(a.bottom, b.bottom)
    if dz <= 0.0:
        return 0.0
    overlap = clip_convex(footprint_polygon(a), footprint_polygon(b))
    inter_area = polygon_area(overlap)
    if inter_area <= 0.0:
        return 0.0
    inter = inter_area * dz
    union = a.volume + b.volume - inter
    if union <= 0.0:
        return 1.0
    return float(min(1.0, max(0.0, inter / union)))
