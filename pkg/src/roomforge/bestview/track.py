"""Camera track file: shared intrinsics plus per-frame camera-from-SLAM poses."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from roomforge.errors import InvariantError, SchemaError
from roomforge.geometry.camera import CameraIntrinsics, CameraPose
from roomforge.geometry.transforms import Sim3Transform


@dataclass
class CameraTrack:
    intrinsics: CameraIntrinsics
    poses: list[CameraPose]
    sim3: Sim3Transform
    frame_source: Path | None = field(default=None)

    def __post_init__(self):
        if not self.poses:
            raise InvariantError("camera track must contain at least one pose")
        indices = [p.frame_index for p in self.poses]
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise InvariantError("frame indices must be strictly increasing")

    def image_path(self, pose: CameraPose) -> Path | None:
        if pose.image is None:
            return None
        p = Path(pose.image)
        if not p.is_absolute() and self.frame_source is not None:
            p = self.frame_source / p
        return p


def track_from_dict(doc: dict, frame_source: Path | None = None) -> CameraTrack:
    try:
        intr = doc["intrinsics"]
        intrinsics = CameraIntrinsics(
            fx=float(intr["fx"]),
            fy=float(intr["fy"]),
            cx=float(intr["cx"]),
            cy=float(intr["cy"]),
            width=int(intr["W"]),
            height=int(intr["H"]),
        )
        s3 = doc["sim3"]
        sim3 = Sim3Transform(
            rotation=np.asarray(s3["R"], dtype=float).reshape(3, 3),
            translation=np.asarray(s3["t"], dtype=float),
            scale=float(s3["s"]),
        )
        poses = [
            CameraPose(
                frame_index=int(f["index"]),
                r_cw=np.asarray(f["R_cw"], dtype=float).reshape(3, 3),
                t_cw=np.asarray(f["t_cw"], dtype=float),
                image=f.get("image"),
            )
            for f in doc["frames"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed camera track: {exc}", path="$")
    return CameraTrack(intrinsics=intrinsics, poses=poses, sim3=sim3, frame_source=frame_source)


def track_to_dict(track: CameraTrack) -> dict:
    k = track.intrinsics
    return {
        "intrinsics": {"fx": k.fx, "fy": k.fy, "cx": k.cx, "cy": k.cy, "W": k.width, "H": k.height},
        "sim3": {
            "R": [float(v) for v in track.sim3.rotation.ravel()],
            "t": [float(v) for v in track.sim3.translation],
            "s": track.sim3.scale,
        },
        "frames": [
            {
                "index": p.frame_index,
                "R_cw": [float(v) for v in p.r_cw.ravel()],
                "t_cw": [float(v) for v in p.t_cw],
                "image": p.image,
            }
            for p in track.poses
        ],
    }


def load_track(path: str | Path) -> CameraTrack:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"camera track is not valid JSON: {exc}", path="$")
    return track_from_dict(doc, frame_source=path.parent)


def save_track(track: CameraTrack, path: str | Path) -> None:
    Path(path).write_text(json.dumps(track_to_dict(track), indent=2) + "\n", encoding="utf-8")
