"""Similarity transforms between the scanned-world frame and SLAM coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from roomforge.errors import InvariantError
from roomforge.scene.model import OrientedBox, normalize_yaw


def rot_z(yaw: float) -> np.ndarray:
    """3x3 rotation about +z."""
    c, s = math.cos(yaw), math.sin(yaw)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class Sim3Transform:
    """Alignment between SLAM and world coordinates.

    Stored parameters (R, t, s) map SLAM points into the world:
    ``p_world = s * R @ p_slam + t``. Mapping world geometry into SLAM
    applies the inverse form ``p_slam = (1/s) * R.T @ (p_world - t)``.
    """

    rotation: np.ndarray
    translation: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        r = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        t = np.asarray(self.translation, dtype=float).reshape(3)
        if not np.allclose(r.T @ r, np.eye(3), atol=1e-9):
            raise InvariantError("sim3 rotation is not orthonormal")
        if np.linalg.det(r) < 0:
            raise InvariantError("sim3 rotation must have det +1")
        if self.scale <= 0:
            raise InvariantError("sim3 scale must be positive")
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", t)
        object.__setattr__(self, "scale", float(self.scale))

    @classmethod
    def identity(cls) -> "Sim3Transform":
        return cls(rotation=np.eye(3), translation=np.zeros(3), scale=1.0)

    def inverse(self) -> "Sim3Transform":
        r_inv = self.rotation.T
        return Sim3Transform(
            rotation=r_inv,
            translation=-(r_inv @ self.translation) / self.scale,
            scale=1.0 / self.scale,
        )

    def to_world(self, points: np.ndarray) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        return self.scale * (p @ self.rotation.T) + self.translation

    def to_slam(self, points: np.ndarray) -> np.ndarray:
        p = np.asarray(points, dtype=float)
        return (p - self.translation) @ self.rotation / self.scale


def world_to_slam_box(box: OrientedBox, transform: Sim3Transform) -> OrientedBox:
    """Map a world-frame scaffold box into SLAM coordinates.

    Center and extents follow the similarity directly; yaw is recovered from
    the azimuth of the mapped local x-axis. With a gravity-consistent
    alignment (rotation keeps +z up) the mapping round-trips exactly under
    the inverse transform.
    """
    center = transform.to_slam(box.center)
    size = box.size / transform.scale
    ex_world = rot_z(box.yaw) @ np.array([1.0, 0.0, 0.0])
    d = transform.rotation.T @ ex_world
    yaw = math.atan2(d[1], d[0])
    return OrientedBox(center=center, size=size, yaw=normalize_yaw(yaw))
