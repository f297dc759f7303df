"""Structural placement: door/window logic, wall panels, the floor span."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from roomforge.errors import DegenerateRoom, MissingHostWall
from roomforge.geometry.boxes import box_iou
from roomforge.geometry.polygon import Polygon2D, convex_hull, polygon_area
from roomforge.scene.model import EntityKind, OrientedBox, SceneEntity, SceneModel, WallSegment

WALL_OFFSET_M = 0.05
DOOR_THICKNESS_M = 0.05
FLOOR_TILE_M = 1.0


@dataclass(frozen=True)
class DoorWindowPlacement:
    yaw: float
    extents: np.ndarray  # (along-wall, thickness, height)
    translation: np.ndarray
    per_axis_scale: np.ndarray
    achieved_iou: float


def place_door_window(
    entity: SceneEntity,
    wall: WallSegment | None,
    t0: float = DOOR_THICKNESS_M,
    mesh_extents: np.ndarray | None = None,
) -> DoorWindowPlacement:
    """Snap a door or window to its host wall: in-plane orientation from the
    wall direction, thickness fixed to t0, in-plane extents from the
    scaffold. Doors sit on the floor; windows keep their scaffold height."""
    if wall is None:
        raise MissingHostWall(f"entity {entity.id!r} has no resolvable host wall")

    scaffold = entity.box
    wall_yaw = wall.yaw
    # pick whichever scaffold footprint axis runs along the wall
    delta = scaffold.yaw - wall_yaw
    if abs(math.cos(delta)) >= abs(math.sin(delta)):
        width = float(scaffold.size[0])
    else:
        width = float(scaffold.size[1])
    height = float(scaffold.size[2])
    extents = np.array([width, t0, height])

    if entity.kind is EntityKind.DOOR:
        bottom = float(wall.a[2])
    else:
        bottom = scaffold.bottom
    translation = np.array([scaffold.center[0], scaffold.center[1], bottom + height / 2.0])

    if mesh_extents is None:
        per_axis_scale = np.ones(3)
    else:
        per_axis_scale = extents / np.asarray(mesh_extents, dtype=float)

    placed_box = OrientedBox(center=translation, size=extents, yaw=wall_yaw)
    return DoorWindowPlacement(
        yaw=wall_yaw,
        extents=extents,
        translation=translation,
        per_axis_scale=per_axis_scale,
        achieved_iou=box_iou(placed_box, scaffold),
    )


@dataclass(frozen=True)
class WallPanel:
    wall_id: str
    quad: np.ndarray  # (4, 3): a, b at floor then b, a at top
    texture_asset_id: str


def _outward_normal(wall: WallSegment, centroid_xy: np.ndarray) -> np.ndarray:
    d = wall.direction[:2]
    normal = np.array([-d[1], d[0]])
    mid = (wall.a[:2] + wall.b[:2]) / 2.0
    side = float(normal @ (mid - centroid_xy))
    if abs(side) < 1e-12:
        raise DegenerateRoom(f"cannot determine the outward side of wall {wall.id!r}")
    return normal if side > 0 else -normal


def place_walls(
    scene: SceneModel, texture_asset_id: str, offset: float = WALL_OFFSET_M
) -> list[WallPanel]:
    """Emit each wall as a textured quad displaced `offset` meters along its
    outward normal (away from the wall-footprint centroid), so panels sit
    behind doors and windows instead of occluding them."""
    if not scene.walls:
        raise DegenerateRoom("scene has no walls to place")
    endpoints = np.array([[*w.a[:2]] for w in scene.walls] + [[*w.b[:2]] for w in scene.walls])
    centroid = endpoints.mean(axis=0)

    panels = []
    for wall in scene.walls:
        n = _outward_normal(wall, centroid)
        shift = np.array([n[0], n[1], 0.0]) * offset
        up = np.array([0.0, 0.0, wall.height])
        a, b = wall.a + shift, wall.b + shift
        quad = np.array([a, b, b + up, a + up])
        panels.append(WallPanel(wall_id=wall.id, quad=quad, texture_asset_id=texture_asset_id))
    return panels


@dataclass(frozen=True)
class FloorPlacement:
    polygon: np.ndarray  # (N, 2) counter-clockwise footprint
    texture_asset_id: str
    base_z: float
    tile_size_m: float = FLOOR_TILE_M

    @property
    def area(self) -> float:
        return polygon_area(Polygon2D(self.polygon))


def _assemble_loop(walls: list[WallSegment], tol: float = 1e-4) -> np.ndarray | None:
    """Chain wall endpoints into a closed footprint loop; None if open."""
    used = [False] * len(walls)
    start = walls[0].a[:2].copy()
    points = [start]
    cursor = walls[0].b[:2].copy()
    used[0] = True
    for _ in range(len(walls) - 1):
        hit = None
        for j, wall in enumerate(walls):
            if used[j]:
                continue
            if np.linalg.norm(wall.a[:2] - cursor) <= tol:
                hit = (j, wall.b[:2].copy())
                break
            if np.linalg.norm(wall.b[:2] - cursor) <= tol:
                hit = (j, wall.a[:2].copy())
                break
        if hit is None:
            return None
        points.append(cursor)
        used[hit[0]] = True
        cursor = hit[1]
    if np.linalg.norm(cursor - start) > tol:
        return None
    polygon = np.array(points)
    # orient counter-clockwise
    x, y = polygon[:, 0], polygon[:, 1]
    signed = float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0
    return polygon if signed >= 0 else polygon[::-1].copy()


def place_floor(scene: SceneModel, texture_asset_id: str) -> FloorPlacement:
    """Span the wall-bounded footprint; falls back to the endpoint convex
    hull when the wall loop is open."""
    if len(scene.walls) < 3:
        raise DegenerateRoom(f"need at least 3 walls for a floor, have {len(scene.walls)}")
    polygon = _assemble_loop(scene.walls)
    if polygon is None:
        endpoints = np.array(
            [[*w.a[:2]] for w in scene.walls] + [[*w.b[:2]] for w in scene.walls]
        )
        hull = convex_hull(endpoints)
        polygon = hull.vertices
    if len(polygon) < 3 or polygon_area(Polygon2D(polygon)) <= 1e-9:
        raise DegenerateRoom("walls do not enclose a usable floor area")
    base_z = float(min(min(w.a[2], w.b[2]) for w in scene.walls))
    return FloorPlacement(polygon=polygon, texture_asset_id=texture_asset_id, base_z=base_z)
