"""Independent oracles used by the test suite.

These deliberately avoid the library's own geometry paths: box membership is
evaluated directly from (center, size, yaw), and IoU comes from counting
grid cells. They stay the reference even if the analytic implementations
change.
"""

from __future__ import annotations

import math

import numpy as np


def _footprint_mask(box, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Membership of grid points (xs x ys) in the box footprint, by direct
    inverse-rotation into the box frame."""
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    dx = gx - box.center[0]
    dy = gy - box.center[1]
    c, s = math.cos(-box.yaw), math.sin(-box.yaw)
    lx = c * dx - s * dy
    ly = s * dx + c * dy
    return (np.abs(lx) <= box.size[0] / 2.0) & (np.abs(ly) <= box.size[1] / 2.0)


def _z_mask(box, zs: np.ndarray) -> np.ndarray:
    return (zs >= box.center[2] - box.size[2] / 2.0) & (zs <= box.center[2] + box.size[2] / 2.0)


def _corners(box) -> np.ndarray:
    signs = np.array(
        [[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)], dtype=float
    )
    local = signs * (np.asarray(box.size) / 2.0)
    c, s = math.cos(box.yaw), math.sin(box.yaw)
    r = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    return np.asarray(box.center) + local @ r.T


def voxel_iou(a, b, resolution: int = 128) -> float:
    """IoU from occupancy of a resolution^3 grid of cell centers spanning the
    axis-aligned bounding box of the two boxes' union."""
    corners = np.vstack([_corners(a), _corners(b)])
    lo = corners.min(axis=0)
    hi = corners.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    axes = [lo[i] + (np.arange(resolution) + 0.5) * span[i] / resolution for i in range(3)]

    occ_a = _footprint_mask(a, axes[0], axes[1])[:, :, None] & _z_mask(a, axes[2])[None, None, :]
    occ_b = _footprint_mask(b, axes[0], axes[1])[:, :, None] & _z_mask(b, axes[2])[None, None, :]

    inter = int(np.count_nonzero(occ_a & occ_b))
    union = int(np.count_nonzero(occ_a)) + int(np.count_nonzero(occ_b)) - inter
    if union == 0:
        return 0.0
    return inter / union


def point_in_convex(q, vertices, tol: float = 1e-9) -> bool:
    """Boundary-inclusive membership in a convex CCW polygon; independent of
    the library's ray-casting implementation."""
    q = np.asarray(q, dtype=float)
    vertices = np.asarray(vertices, dtype=float)
    n = len(vertices)
    if n == 1:
        return bool(np.linalg.norm(q - vertices[0]) <= tol)
    if n == 2:
        a, b = vertices
        ab = b - a
        t = float(np.clip(np.dot(q - a, ab) / max(np.dot(ab, ab), 1e-300), 0.0, 1.0))
        return bool(np.linalg.norm(q - (a + t * ab)) <= tol)
    for i in range(n):
        a = vertices[i]
        b = vertices[(i + 1) % n]
        cross = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
        if cross < -tol * max(1.0, np.linalg.norm(b - a)):
            return False
    return True


def count_scene_document(doc: dict) -> dict:
    """Schema walker: raw counts straight off the JSON document."""
    kinds: dict[str, int] = {}
    for e in doc["entities"]:
        kinds[e["kind"]] = kinds.get(e["kind"], 0) + 1
    return {
        "entities": len(doc["entities"]),
        "walls": len(doc["walls"]),
        **{f"kind:{k}": v for k, v in sorted(kinds.items())},
    }
