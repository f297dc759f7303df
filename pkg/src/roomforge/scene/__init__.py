from .model import (
    EntityKind,
    ObjectStatus,
    OrientedBox,
    SceneEntity,
    SceneModel,
    WallSegment,
    advance_status,
    box_corners,
    box_from_corners,
    normalize_yaw,
)
from .io import parse_scene, serialize_scene, scene_to_dict, scene_from_dict

__all__ = [
    "EntityKind",
    "ObjectStatus",
    "OrientedBox",
    "SceneEntity",
    "SceneModel",
    "WallSegment",
    "advance_status",
    "box_corners",
    "box_from_corners",
    "normalize_yaw",
    "parse_scene",
    "serialize_scene",
    "scene_to_dict",
    "scene_from_dict",
]
