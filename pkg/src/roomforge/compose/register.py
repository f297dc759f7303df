"""Per-object registration: scale, orient, guard, and ground one mesh into
its scaffold.

The chain follows the registration algorithm: isotropic longest-edge
alignment first; flat meshes (shortest edge < 0.15 x longest) search 90-degree
axis flips jointly with the yaw grid, everything else searches yaw only in a
+/-45 degree window around the best-view yaw at 5-degree steps; a per-axis
scale then guards extents to at most 1.3 x the scaffold before the bottom
face is pinned to the scaffold's bottom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from roomforge.geometry.boxes import box_iou
from roomforge.scene.model import OrientedBox, normalize_yaw

GUARD_FACTOR = 1.3
FLAT_RATIO = 0.15
YAW_WINDOW = math.radians(45.0)
YAW_STEP = math.radians(5.0)
FLIPS = ("none", "Rx90", "Ry90", "Rz90")

# Improvements below this are floating-point noise; keeping the earlier
# candidate makes the documented tie-breaks (lowest angle, flip order)
# deterministic for symmetric footprints.
IOU_TIE_EPS = 1e-12

# 90-degree flips permute the two extents orthogonal to the flip axis.
_FLIP_PERMUTATION = {
    "none": (0, 1, 2),
    "Rx90": (0, 2, 1),
    "Ry90": (2, 1, 0),
    "Rz90": (1, 0, 2),
}


def longest_edge_scale(mesh_extents: np.ndarray, scaffold: OrientedBox) -> float:
    """Isotropic scale making the mesh's longest edge equal the scaffold's."""
    mesh_extents = np.asarray(mesh_extents, dtype=float)
    if np.any(mesh_extents <= 0):
        raise ValueError("mesh extents must be positive")
    return float(np.max(scaffold.size) / np.max(mesh_extents))


def detect_flat(mesh_extents: np.ndarray) -> bool:
    e = np.asarray(mesh_extents, dtype=float)
    return bool(np.min(e) < FLAT_RATIO * np.max(e))


def flip_extents(extents: np.ndarray, flip: str) -> np.ndarray:
    e = np.asarray(extents, dtype=float)
    try:
        perm = _FLIP_PERMUTATION[flip]
    except KeyError:
        raise ValueError(f"unknown flip {flip!r}; expected one of {FLIPS}")
    return e[list(perm)]


def yaw_grid(theta_star: float) -> list[float]:
    """The 19 candidate angles theta* - 45 deg .. theta* + 45 deg, step 5 deg."""
    return [theta_star + k * YAW_STEP for k in range(-9, 10)]


def _candidate_iou(extents: np.ndarray, scaffold: OrientedBox, yaw: float) -> float:
    candidate = OrientedBox(center=scaffold.center, size=extents, yaw=normalize_yaw(yaw))
    return box_iou(candidate, scaffold)


def yaw_search(
    candidate_extents: np.ndarray, scaffold: OrientedBox, theta_star: float
) -> tuple[float, float]:
    """Argmax of IoU over the yaw grid; ties go to the lowest grid angle."""
    best_theta = None
    best_iou = -1.0
    for theta in yaw_grid(theta_star):
        iou = _candidate_iou(np.asarray(candidate_extents, dtype=float), scaffold, theta)
        if iou > best_iou + IOU_TIE_EPS:
            best_iou = iou
            best_theta = theta
    return float(best_theta), float(best_iou)


def flat_orientation_search(
    extents: np.ndarray, scaffold: OrientedBox, theta_star: float
) -> tuple[str, float, float]:
    """Joint flip x yaw grid search for thin meshes.

    Tie-break order: none < Rx90 < Ry90 < Rz90, then lowest angle, realized
    by strict improvement over an in-order scan.
    """
    extents = np.asarray(extents, dtype=float)
    best = ("none", theta_star, -1.0)
    for flip in FLIPS:
        permuted = flip_extents(extents, flip)
        for theta in yaw_grid(theta_star):
            iou = _candidate_iou(permuted, scaffold, theta)
            if iou > best[2] + IOU_TIE_EPS:
                best = (flip, theta, iou)
    return best[0], float(best[1]), float(best[2])


def refine_axis_scale(extents_after_yaw: np.ndarray, scaffold: OrientedBox) -> np.ndarray:
    """Per-axis guard scale min(1, 1.3 * scaffold_extent / extent).

    Never enlarges; an extent exactly at the guard keeps scale 1. Extents
    must already be expressed in scaffold-aligned axes.
    """
    extents = np.asarray(extents_after_yaw, dtype=float)
    return np.minimum(1.0, GUARD_FACTOR * scaffold.size / extents)


def align_bottom(translation: np.ndarray, height: float, scaffold: OrientedBox) -> np.ndarray:
    """Pin the placed bottom face to the scaffold's bottom face."""
    out = np.asarray(translation, dtype=float).copy()
    out[2] = scaffold.bottom + height / 2.0
    return out


def rotated_footprint_extents(extents_xy: np.ndarray, delta: float) -> np.ndarray:
    """Axis-aligned extents of a w x d rectangle rotated by delta."""
    w, d = float(extents_xy[0]), float(extents_xy[1])
    c, s = abs(math.cos(delta)), abs(math.sin(delta))
    return np.array([w * c + d * s, w * s + d * c])


@dataclass(frozen=True)
class Registration:
    """Everything the manifest needs to reproduce one registered object."""

    yaw: float
    flip: str
    per_axis_scale: np.ndarray  # applied along post-flip mesh axes
    translation: np.ndarray
    achieved_iou: float
    final_extents: np.ndarray  # scaffold-frame extents, used by the guard checks


def register_object(
    mesh_extents: np.ndarray, scaffold: OrientedBox, theta_star: float
) -> Registration:
    """Run the full general-object branch for one mesh."""
    mesh_extents = np.asarray(mesh_extents, dtype=float)
    s_iso = longest_edge_scale(mesh_extents, scaffold)
    scaled = s_iso * mesh_extents

    if detect_flat(mesh_extents):
        flip, theta_best, iou_best = flat_orientation_search(scaled, scaffold, theta_star)
        oriented = flip_extents(scaled, flip)
    else:
        flip = "none"
        oriented = scaled
        theta_best, iou_best = yaw_search(scaled, scaffold, theta_star)

    # Measure the oriented candidate in scaffold-aligned axes before the
    # guard. With a residual rotation the xy guard factors are coupled, so
    # they collapse to their minimum to keep the per-axis bound exact.
    delta = normalize_yaw(theta_best - scaffold.yaw)
    aligned = abs(math.sin(delta)) < 1e-12
    if aligned:
        measured = oriented.copy()
    else:
        measured = np.array(
            [*rotated_footprint_extents(oriented[:2], delta), oriented[2]]
        )
    scale = refine_axis_scale(measured, scaffold)
    if not aligned:
        scale[0] = scale[1] = min(scale[0], scale[1])

    final_extents = scale * measured
    height = float(scale[2] * oriented[2])
    translation = align_bottom(scaffold.center, height, scaffold)

    return Registration(
        yaw=normalize_yaw(theta_best),
        flip=flip,
        per_axis_scale=s_iso * scale,
        translation=translation,
        achieved_iou=iou_best,
        final_extents=final_extents,
    )
