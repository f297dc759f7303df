"""Author the static test fixtures: the room document and a synthetic
camera track orbiting inside it.

Run from the repo root: python tools/make_fixtures.py
"""

import json
import math
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "tests" / "data"

ROOM_W = 5.10  # x extent, matching the evaluation room footprint
ROOM_D = 3.15  # y extent
ROOM_H = 2.40
HALF_PI = round(math.pi / 2, 6)


def fnum(x):
    r = round(float(x), 6)
    return 0.0 if r == 0 else r


def vec(*xs):
    return [fnum(x) for x in xs]


def entity(eid, kind, label, center, size, yaw=0.0, host=None):
    return {
        "id": eid,
        "kind": kind,
        "label": label,
        "box": {"center": vec(*center), "size": vec(*size), "yaw": fnum(yaw)},
        "host_wall_id": host,
        "status": "pending",
        "best_frame_pose": None,
        "mapping": None,
        "asset_id": None,
    }


def make_room() -> dict:
    walls = [
        {"id": "wall_0", "a": vec(0, 0, 0), "b": vec(ROOM_W, 0, 0), "height": fnum(ROOM_H), "thickness": 0.1},
        {"id": "wall_1", "a": vec(ROOM_W, 0, 0), "b": vec(ROOM_W, ROOM_D, 0), "height": fnum(ROOM_H), "thickness": 0.1},
        {"id": "wall_2", "a": vec(ROOM_W, ROOM_D, 0), "b": vec(0, ROOM_D, 0), "height": fnum(ROOM_H), "thickness": 0.1},
        {"id": "wall_3", "a": vec(0, ROOM_D, 0), "b": vec(0, 0, 0), "height": fnum(ROOM_H), "thickness": 0.1},
    ]

    entities = []
    # wall entities mirror the wall segments so texture generation has
    # lifecycle state to hang off
    entities.append(entity("wall_0", "wall", "wall", (ROOM_W / 2, 0, ROOM_H / 2), (ROOM_W, 0.1, ROOM_H), 0.0))
    entities.append(entity("wall_1", "wall", "wall", (ROOM_W, ROOM_D / 2, ROOM_H / 2), (ROOM_D, 0.1, ROOM_H), HALF_PI))
    entities.append(entity("wall_2", "wall", "wall", (ROOM_W / 2, ROOM_D, ROOM_H / 2), (ROOM_W, 0.1, ROOM_H), 0.0))
    entities.append(entity("wall_3", "wall", "wall", (0, ROOM_D / 2, ROOM_H / 2), (ROOM_D, 0.1, ROOM_H), HALF_PI))

    entities.append(entity("door_0", "door", "door", (1.0, 0.0, 1.0), (0.9, 0.12, 2.0), 0.0, host="wall_0"))
    entities.append(entity("door_1", "door", "door", (ROOM_W, 1.1, 1.0), (0.9, 0.12, 2.0), HALF_PI, host="wall_1"))
    entities.append(entity("door_2", "door", "door", (0.0, 2.3, 1.0), (0.9, 0.12, 2.0), HALF_PI, host="wall_3"))

    objects = [
        ("obj_sofa", "sofa", (1.6, 2.55, 0.42), (2.1, 0.95, 0.84), 0.0),
        ("obj_coffee_table", "coffee table", (1.7, 1.55, 0.22), (1.1, 0.6, 0.44), 0.0),
        ("obj_tv_stand", "tv stand", (1.7, 0.35, 0.25), (1.8, 0.45, 0.5), 0.0),
        ("obj_tv", "tv", (1.7, 0.38, 0.95), (1.45, 0.12, 0.85), 0.0),
        ("obj_bookshelf", "bookshelf", (4.75, 2.3, 0.9), (0.4, 1.1, 1.8), HALF_PI),
        ("obj_armchair", "armchair", (3.2, 2.5, 0.45), (0.85, 0.9, 0.9), -0.5),
        ("obj_floor_lamp", "floor lamp", (0.45, 1.9, 0.8), (0.4, 0.4, 1.6), 0.0),
        ("obj_dining_table", "dining table", (3.9, 1.0, 0.37), (1.4, 0.85, 0.74), 0.0),
        ("obj_chair_a", "chair", (3.6, 0.45, 0.45), (0.45, 0.5, 0.9), 0.0),
        ("obj_chair_b", "chair", (4.2, 1.6, 0.45), (0.45, 0.5, 0.9), 3.141592),
        ("obj_plant", "plant", (4.8, 0.35, 0.55), (0.5, 0.5, 1.1), 0.0),
        ("obj_rug", "rug", (1.7, 1.6, 0.01), (2.4, 1.6, 0.02), 0.0),
        ("obj_curtains", "curtains", (3.4, 3.08, 1.3), (1.8, 0.14, 2.2), 0.0),
        ("obj_mirror", "mirror", (0.06, 0.9, 1.25), (0.55, 0.05, 1.15), HALF_PI),
        ("obj_aircon", "air conditioner", (2.5, 3.05, 2.15), (0.95, 0.24, 0.32), 0.0),
    ]
    for eid, label, center, size, yaw in objects:
        entities.append(entity(eid, "object", label, center, size, yaw))

    return {
        "origin_calibration": {"position": vec(0, 0, 0), "yaw": 0.0},
        "style": None,
        "walls": walls,
        "entities": entities,
        "revision": 0,
    }


def look_at_rotation(position, target):
    """World-to-camera rotation: +z forward, +x right, +y down (z-up world)."""
    position = np.asarray(position, dtype=float)
    forward = np.asarray(target, dtype=float) - position
    forward /= np.linalg.norm(forward)
    up = np.array([0.0, 0.0, 1.0])
    right = np.cross(forward, up)
    right /= np.linalg.norm(right)
    down = np.cross(forward, right)
    r_wc = np.column_stack([right, down, forward])
    return r_wc.T


def make_track() -> dict:
    yaw_s = 0.35
    c, s = math.cos(yaw_s), math.sin(yaw_s)
    r_s = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    t_s = np.array([0.4, -0.3, 0.1])
    scale = 0.8

    def to_slam(p):
        return r_s.T @ (np.asarray(p, dtype=float) - t_s) / scale

    frames = []
    n_cams = 8
    for i in range(n_cams):
        ang = 2 * math.pi * i / n_cams
        pos = np.array(
            [ROOM_W / 2 + 1.9 * math.cos(ang), ROOM_D / 2 + 1.05 * math.sin(ang), 1.5]
        )
        # alternate between low and high fixation so wall-mounted objects
        # near the ceiling are seen too
        target = np.array([ROOM_W / 2, ROOM_D / 2, 1.0 if i % 2 == 0 else 1.9])
        r_cw_world = look_at_rotation(pos, target)
        r_cw_slam = r_cw_world @ r_s
        t_cw_slam = -r_cw_slam @ to_slam(pos)
        frames.append(
            {
                "index": i * 10,
                "R_cw": [fnum(v) for v in r_cw_slam.ravel()],
                "t_cw": [fnum(v) for v in t_cw_slam],
                "image": f"frames/{i * 10:06d}.png",
            }
        )

    return {
        "intrinsics": {"fx": 500.0, "fy": 500.0, "cx": 320.0, "cy": 240.0, "W": 640, "H": 480},
        "sim3": {"R": [fnum(v) for v in r_s.ravel()], "t": [fnum(v) for v in t_s], "s": fnum(scale)},
        "frames": frames,
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    room = make_room()
    (OUT / "fixture_room.json").write_text(
        json.dumps(room, sort_keys=True, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    track = make_track()
    (OUT / "fixture_track.json").write_text(
        json.dumps(track, sort_keys=True, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
    )
    n_obj = sum(1 for e in room["entities"] if e["kind"] == "object")
    n_door = sum(1 for e in room["entities"] if e["kind"] == "door")
    print(f"fixture_room.json: {len(room['entities'])} entities "
          f"({n_obj} objects, {n_door} doors), {len(room['walls'])} walls")
    print(f"fixture_track.json: {len(track['frames'])} frames")


if __name__ == "__main__":
    main()
