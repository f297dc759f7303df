from .transforms import Sim3Transform, rot_z, world_to_slam_box
from .camera import CameraIntrinsics, CameraPose, project_point
from .polygon import (
    Polygon2D,
    clip_convex,
    convex_hull,
    point_in_polygon,
    polygon_area,
)
from .boxes import box_iou, footprint_polygon

__all__ = [
    "Sim3Transform",
    "rot_z",
    "world_to_slam_box",
    "CameraIntrinsics",
    "CameraPose",
    "project_point",
    "Polygon2D",
    "clip_convex",
    "convex_hull",
    "point_in_polygon",
    "polygon_area",
    "box_iou",
    "footprint_polygon",
]
