"""Per-object best-view frame selection.

For every frame, the object's scaffold corners are mapped into SLAM
coordinates, projected, and filtered against occluder hulls; frames are then
ranked lexicographically by (visible corners, centering, visible hull area)
and the argmax wins, with the lowest frame index breaking ties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from roomforge.bestview.track import CameraTrack
from roomforge.errors import NoVisibleFrame
from roomforge.geometry.camera import CameraIntrinsics, CameraPose, camera_space, project_point
from roomforge.geometry.polygon import Polygon2D, convex_hull, point_in_polygon, polygon_area
from roomforge.geometry.transforms import Sim3Transform, world_to_slam_box
from roomforge.scene.model import EntityKind, SceneEntity, SceneModel, box_corners

OCCLUDER_KINDS = (EntityKind.OBJECT, EntityKind.DOOR, EntityKind.WINDOW)


@dataclass(frozen=True)
class FrameScore:
    """Lexicographic frame score; vis_cnt 0 is the never-selected sentinel."""

    vis_cnt: int
    center_dist: float
    vis_area: float

    @classmethod
    def sentinel(cls) -> "FrameScore":
        return cls(vis_cnt=0, center_dist=math.inf, vis_area=0.0)

    @property
    def is_sentinel(self) -> bool:
        return self.vis_cnt == 0

    def key(self) -> tuple[float, float, float]:
        return (self.vis_cnt, -self.center_dist, self.vis_area)


def lex_better(a: FrameScore, b: FrameScore) -> bool:
    """True iff `a` strictly beats `b`: visibility first, then centering,
    then visible area. A sentinel never wins."""
    if a.is_sentinel:
        return False
    if b.is_sentinel:
        return True
    return a.key() > b.key()


@dataclass(frozen=True)
class BestViewResult:
    object_id: str
    frame_index: int
    pose: CameraPose
    score: FrameScore
    annotation: Polygon2D

    @property
    def bounding_rect(self) -> tuple[float, float, float, float]:
        """Axis-aligned (u0, v0, u1, v1) of the annotation hull, for clients
        that want a rectangle rather than the hull itself."""
        v = self.annotation.vertices
        return (
            float(v[:, 0].min()),
            float(v[:, 1].min()),
            float(v[:, 0].max()),
            float(v[:, 1].max()),
        )


@dataclass(frozen=True)
class _OccluderView:
    hull: Polygon2D
    z_near: float


def _occluder_view(slam_corners: np.ndarray, pose: CameraPose, k: CameraIntrinsics):
    pixels = []
    z_near = math.inf
    for corner in slam_corners:
        z = float(camera_space(corner, pose)[2])
        if z > 0:
            z_near = min(z_near, z)
        hit = project_point(corner, pose, k)
        if hit is not None:
            pixels.append(hit[:2])
    if not pixels or not math.isfinite(z_near):
        return None
    return _OccluderView(hull=convex_hull(np.asarray(pixels)), z_near=z_near)


def visible_corners(
    entity: SceneEntity,
    frame: CameraPose,
    track: CameraTrack,
    occluders: list[SceneEntity],
    depth_margin: float = 0.05,
) -> list[tuple[int, float, float, float]]:
    """Project the entity's SLAM-mapped corners into one frame and drop any
    corner hidden behind an occluder.

    A valid corner is discarded iff its pixel falls inside an occluder's
    projected hull and that occluder's near depth plus the margin is closer
    than the corner: z_near + margin < corner depth.
    """
    slam_box = world_to_slam_box(entity.box, track.sim3)
    corners = box_corners(slam_box)

    candidates: list[tuple[int, float, float, float]] = []
    for k_idx, corner in enumerate(corners):
        hit = project_point(corner, frame, track.intrinsics)
        if hit is not None:
            candidates.append((k_idx, hit[0], hit[1], hit[2]))
    if not candidates:
        return []

    views = []
    for occ in occluders:
        if occ.id == entity.id:
            continue
        occ_corners = box_corners(world_to_slam_box(occ.box, track.sim3))
        view = _occluder_view(occ_corners, frame, track.intrinsics)
        if view is not None:
            views.append(view)

    survivors = []
    for k_idx, u, v, z in candidates:
        blocked = any(
            view.z_near + depth_margin < z and point_in_polygon((u, v), view.hull)
            for view in views
        )
        if not blocked:
            survivors.append((k_idx, u, v, z))
    return survivors


def score_frame(
    survivors: list[tuple[int, float, float, float]], k: CameraIntrinsics
) -> FrameScore:
    if not survivors:
        return FrameScore.sentinel()
    pixels = np.asarray([(u, v) for _, u, v, _ in survivors], dtype=float)
    center_uv = pixels.mean(axis=0)
    target = np.array([k.width / 2.0, k.height / 2.0])
    area = polygon_area(convex_hull(pixels)) if len(pixels) >= 3 else 0.0
    return FrameScore(
        vis_cnt=len(survivors),
        center_dist=float(np.linalg.norm(center_uv - target)),
        vis_area=float(area),
    )


def select_best_view(
    entity: SceneEntity,
    scene: SceneModel,
    track: CameraTrack,
    depth_margin: float = 0.05,
) -> BestViewResult:
    """Evaluate every frame and return the lexicographic argmax.

    Occluders are all other furniture plus doors/windows; walls enclose the
    camera and are excluded. Writes best_frame_pose onto the entity; the
    caller persists the scene.
    """
    occluders = [
        e for e in scene.entities if e.id != entity.id and e.kind in OCCLUDER_KINDS
    ]

    best_pose: CameraPose | None = None
    best_score = FrameScore.sentinel()
    best_pixels: np.ndarray | None = None
    for pose in track.poses:
        survivors = visible_corners(entity, pose, track, occluders, depth_margin)
        score = score_frame(survivors, track.intrinsics)
        if lex_better(score, best_score):
            best_score = score
            best_pose = pose
            best_pixels = np.asarray([(u, v) for _, u, v, _ in survivors], dtype=float)

    if best_pose is None or best_score.is_sentinel:
        raise NoVisibleFrame(f"object {entity.id!r} is not visible in any frame")

    entity.best_frame_pose = best_pose.matrix4()
    return BestViewResult(
        object_id=entity.id,
        frame_index=best_pose.frame_index,
        pose=best_pose,
        score=best_score,
        annotation=convex_hull(best_pixels),
    )


def camera_yaw_from_pose(pose_matrix: np.ndarray, sim3: Sim3Transform | None = None) -> float:
    """Azimuth of the camera viewing direction in world coordinates.

    The +z camera axis expressed in SLAM is the third row of R_cw; the
    alignment rotation carries it into the world frame. This is the yaw
    anchor the registration search window is centered on.
    """
    pose_matrix = np.asarray(pose_matrix, dtype=float).reshape(4, 4)
    view_dir_slam = pose_matrix[2, :3]
    if sim3 is not None:
        view_dir = sim3.rotation @ view_dir_slam
    else:
        view_dir = view_dir_slam
    return math.atan2(view_dir[1], view_dir[0])
