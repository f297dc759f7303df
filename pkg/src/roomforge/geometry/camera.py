"""Pinhole camera model and point projection with frustum validity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from roomforge.errors import InvariantError


@dataclass(frozen=True)
class CameraIntrinsics:
    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self):
        if self.fx <= 0 or self.fy <= 0:
            raise InvariantError("focal lengths must be positive")
        if self.width <= 0 or self.height <= 0:
            raise InvariantError("image dimensions must be positive")


@dataclass(frozen=True)
class CameraPose:
    """Camera-from-SLAM extrinsics for one frame."""

    frame_index: int
    r_cw: np.ndarray
    t_cw: np.ndarray
    image: str | None = None

    def __post_init__(self):
        if self.frame_index < 0:
            raise InvariantError("frame_index must be >= 0")
        r = np.asarray(self.r_cw, dtype=float).reshape(3, 3)
        t = np.asarray(self.t_cw, dtype=float).reshape(3)
        if not np.allclose(r.T @ r, np.eye(3), atol=1e-6):
            raise InvariantError(f"frame {self.frame_index}: rotation not orthonormal")
        object.__setattr__(self, "r_cw", r)
        object.__setattr__(self, "t_cw", t)

    def matrix4(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.r_cw
        m[:3, 3] = self.t_cw
        return m

    @classmethod
    def from_matrix4(cls, frame_index: int, m: np.ndarray, image: str | None = None) -> "CameraPose":
        m = np.asarray(m, dtype=float).reshape(4, 4)
        return cls(frame_index=frame_index, r_cw=m[:3, :3], t_cw=m[:3, 3], image=image)


def camera_space(point_slam: np.ndarray, pose: CameraPose) -> np.ndarray:
    return pose.r_cw @ np.asarray(point_slam, dtype=float) + pose.t_cw


def project_point(
    point_slam: np.ndarray, pose: CameraPose, intrinsics: CameraIntrinsics
) -> tuple[float, float, float] | None:
    """Project a SLAM-frame point; returns (u, v, depth) or None when invalid.

    A projection is valid only when the depth is positive and the pixel lies
    strictly inside the image: z > 0, 0 < u < W, 0 < v < H. Rejection is a
    value, not an error.
    """
    cam = camera_space(point_slam, pose)
    x, y, z = float(cam[0]), float(cam[1]), float(cam[2])
    if z <= 0:
        return None
    u = intrinsics.fx * x / z + intrinsics.cx
    v = intrinsics.fy * y / z + intrinsics.cy
    if not (0 < u < intrinsics.width and 0 < v < intrinsics.height):
        return None
    return (u, v, z)
