from .register import (
    FLAT_RATIO,
    FLIPS,
    GUARD_FACTOR,
    YAW_STEP,
    YAW_WINDOW,
    Registration,
    align_bottom,
    detect_flat,
    flat_orientation_search,
    flip_extents,
    longest_edge_scale,
    refine_axis_scale,
    register_object,
    rotated_footprint_extents,
    yaw_grid,
    yaw_search,
)
from .placement import (
    DOOR_THICKNESS_M,
    FLOOR_TILE_M,
    WALL_OFFSET_M,
    DoorWindowPlacement,
    FloorPlacement,
    WallPanel,
    place_door_window,
    place_floor,
    place_walls,
)
from .manifest import (
    ComposedScene,
    EnvironmentAssets,
    PlacedObject,
    SkyboxPlacement,
    compose_scene,
    verify_placement,
)

__all__ = [
    "FLAT_RATIO",
    "FLIPS",
    "GUARD_FACTOR",
    "YAW_STEP",
    "YAW_WINDOW",
    "Registration",
    "align_bottom",
    "detect_flat",
    "flat_orientation_search",
    "flip_extents",
    "longest_edge_scale",
    "refine_axis_scale",
    "register_object",
    "rotated_footprint_extents",
    "yaw_grid",
    "yaw_search",
    "DOOR_THICKNESS_M",
    "FLOOR_TILE_M",
    "WALL_OFFSET_M",
    "DoorWindowPlacement",
    "FloorPlacement",
    "WallPanel",
    "place_door_window",
    "place_floor",
    "place_walls",
    "ComposedScene",
    "EnvironmentAssets",
    "PlacedObject",
    "SkyboxPlacement",
    "compose_scene",
    "verify_placement",
]
