"""Canonical scene document: oriented-box scaffolds, walls, and object lifecycle.

Everything here is a plain value type. Mutation of a scene happens only through
the authoring service's single-writer session; these types just validate and
carry state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from roomforge.errors import IllegalTransition, InvariantError
from roomforge.styling.types import MappingRow, StyleSpec

TWO_PI = 2.0 * math.pi


def normalize_yaw(yaw: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    y = math.fmod(float(yaw), TWO_PI)
    if y > math.pi:
        y -= TWO_PI
    elif y <= -math.pi:
        y += TWO_PI
    return y


def _rot_z(yaw: float) -> np.ndarray:
    c, s = math.cos(yaw), math.sin(yaw)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class OrientedBox:
    """A z-up spatial scaffold: center (m), per-axis extents (m), yaw (rad).

    The only orientation degree of freedom is yaw about +z; scaffolds never
    carry roll or pitch.
    """

    center: np.ndarray
    size: np.ndarray
    yaw: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(3)
        size = np.asarray(self.size, dtype=float).reshape(3)
        if not np.all(size > 0):
            raise InvariantError(f"box extents must be strictly positive, got {size.tolist()}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "yaw", normalize_yaw(self.yaw))

    @property
    def volume(self) -> float:
        return float(np.prod(self.size))

    @property
    def bottom(self) -> float:
        return float(self.center[2] - self.size[2] / 2.0)

    @property
    def top(self) -> float:
        return float(self.center[2] + self.size[2] / 2.0)

    def with_(self, **kwargs) -> "OrientedBox":
        return replace(self, **kwargs)


# Local corner offsets in units of half-extent: low-z quad counter-clockwise
# (viewed from +z), then the high-z quad in the same x/y order.
_CORNER_SIGNS = np.array(
    [
        [-1, -1, -1],
        [+1, -1, -1],
        [+1, +1, -1],
        [-1, +1, -1],
        [-1, -1, +1],
        [+1, -1, +1],
        [+1, +1, +1],
        [-1, +1, +1],
    ],
    dtype=float,
)


def box_corners(box: OrientedBox) -> np.ndarray:
    """Return the 8 corners of a box, shape (8, 3), in the fixed documented order."""
    local = _CORNER_SIGNS * (box.size / 2.0)
    return box.center + local @ _rot_z(box.yaw).T


def box_from_corners(corners: np.ndarray) -> OrientedBox:
    """Reconstruct (center, size, yaw) from corners in box_corners order."""
    corners = np.asarray(corners, dtype=float).reshape(8, 3)
    center = corners.mean(axis=0)
    ex = corners[1] - corners[0]  # local +x edge
    ey = corners[3] - corners[0]  # local +y edge
    sz = corners[4, 2] - corners[0, 2]
    yaw = math.atan2(ex[1], ex[0])
    size = np.array([np.linalg.norm(ex), np.linalg.norm(ey), sz])
    return OrientedBox(center=center, size=size, yaw=yaw)


class EntityKind(str, Enum):
    WALL = "wall"
    DOOR = "door"
    WINDOW = "window"
    OBJECT = "object"


class ObjectStatus(str, Enum):
    PENDING = "pending"
    GENERATING = "generating"
    COMPLETE = "complete"
    NEEDS_ATTENTION = "needs-attention"
    CONFIRMED = "confirmed"


# Legal transitions; any status may additionally re-enter GENERATING
# (regeneration).
_LEGAL_TRANSITIONS: dict[ObjectStatus, set[ObjectStatus]] = {
    ObjectStatus.PENDING: {ObjectStatus.GENERATING},
    ObjectStatus.GENERATING: {
        ObjectStatus.GENERATING,
        ObjectStatus.COMPLETE,
        ObjectStatus.NEEDS_ATTENTION,
    },
    ObjectStatus.COMPLETE: {ObjectStatus.GENERATING},
    ObjectStatus.NEEDS_ATTENTION: {ObjectStatus.CONFIRMED, ObjectStatus.GENERATING},
    ObjectStatus.CONFIRMED: {ObjectStatus.GENERATING},
}

# Architectural entities carry generation state but never enter the
# red-flag/confirmation path.
_ARCHITECTURAL_STATUSES = {
    ObjectStatus.PENDING,
    ObjectStatus.GENERATING,
    ObjectStatus.COMPLETE,
}


def _is_rigid(pose: np.ndarray, tol: float = 1e-6) -> bool:
    pose = np.asarray(pose, dtype=float)
    if pose.shape != (4, 4):
        return False
    r = pose[:3, :3]
    if not np.allclose(r.T @ r, np.eye(3), atol=tol):
        return False
    if not math.isclose(float(np.linalg.det(r)), 1.0, abs_tol=1e-5):
        return False
    return bool(np.allclose(pose[3], [0.0, 0.0, 0.0, 1.0], atol=tol))


@dataclass
class SceneEntity:
    """One detected scene element and its transformation lifecycle state."""

    id: str
    kind: EntityKind
    label: str
    box: OrientedBox
    host_wall_id: str | None = None
    status: ObjectStatus = ObjectStatus.PENDING
    best_frame_pose: np.ndarray | None = None
    mapping: MappingRow | None = None
    asset_id: str | None = None
    extra: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.kind = EntityKind(self.kind)
        self.status = ObjectStatus(self.status)
        if self.kind in (EntityKind.DOOR, EntityKind.WINDOW) and not self.host_wall_id:
            raise InvariantError(f"{self.kind.value} entity {self.id!r} requires host_wall_id")
        if self.kind is not EntityKind.OBJECT and self.status not in _ARCHITECTURAL_STATUSES:
            raise InvariantError(
                f"{self.kind.value} entity {self.id!r} cannot hold status {self.status.value}"
            )
        if self.best_frame_pose is not None:
            pose = np.asarray(self.best_frame_pose, dtype=float).reshape(4, 4)
            if not _is_rigid(pose):
                raise InvariantError(f"best_frame_pose of {self.id!r} is not a rigid transform")
            self.best_frame_pose = pose


def advance_status(entity: SceneEntity, target: ObjectStatus) -> SceneEntity:
    """Move an entity to `target`, enforcing the lifecycle state machine.

    Returns the mutated entity. The caller owns the scene revision bump.
    """
    target = ObjectStatus(target)
    legal = _LEGAL_TRANSITIONS.get(entity.status, set())
    if target not in legal:
        raise IllegalTransition(
            f"{entity.id}: {entity.status.value} -> {target.value} is not a legal transition"
        )
    if entity.kind is not EntityKind.OBJECT and target not in _ARCHITECTURAL_STATUSES:
        raise IllegalTransition(
            f"{entity.id}: {entity.kind.value} entities never enter {target.value}"
        )
    entity.status = target
    return entity


@dataclass
class WallSegment:
    """A wall as a floor-level segment, matching layout-estimation output."""

    id: str
    a: np.ndarray
    b: np.ndarray
    height: float
    thickness: float = 0.1
    extra: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float).reshape(3)
        self.b = np.asarray(self.b, dtype=float).reshape(3)
        if self.height <= 0:
            raise InvariantError(f"wall {self.id!r} height must be > 0")
        if self.thickness < 0:
            raise InvariantError(f"wall {self.id!r} thickness must be >= 0")
        if not math.isclose(self.a[2], self.b[2], abs_tol=1e-9):
            raise InvariantError(f"wall {self.id!r} endpoints must share a floor height")
        if float(np.linalg.norm(self.b - self.a)) <= 0:
            raise InvariantError(f"wall {self.id!r} endpoints coincide")

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))

    @property
    def direction(self) -> np.ndarray:
        d = self.b - self.a
        return d / np.linalg.norm(d)

    @property
    def yaw(self) -> float:
        d = self.b - self.a
        return math.atan2(d[1], d[0])

    def to_box(self, min_thickness: float = 1e-4) -> OrientedBox:
        """Lossy only for zero-thickness walls, which get a nominal thickness."""
        mid = (self.a + self.b) / 2.0
        center = np.array([mid[0], mid[1], self.a[2] + self.height / 2.0])
        size = np.array([self.length, max(self.thickness, min_thickness), self.height])
        return OrientedBox(center=center, size=size, yaw=self.yaw)

    @classmethod
    def from_box(cls, wall_id: str, box: OrientedBox) -> "WallSegment":
        half = box.size[0] / 2.0
        d = _rot_z(box.yaw) @ np.array([1.0, 0.0, 0.0])
        z0 = box.center[2] - box.size[2] / 2.0
        a = np.array([box.center[0] - d[0] * half, box.center[1] - d[1] * half, z0])
        b = np.array([box.center[0] + d[0] * half, box.center[1] + d[1] * half, z0])
        return cls(id=wall_id, a=a, b=b, height=float(box.size[2]), thickness=float(box.size[1]))


@dataclass
class OriginCalibration:
    """World-origin adjustment captured during first alignment."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    yaw: float = 0.0

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(3)
        self.yaw = normalize_yaw(self.yaw)


@dataclass
class SceneModel:
    """The persisted room document: walls, entities, calibration, style."""

    walls: list[WallSegment] = field(default_factory=list)
    entities: list[SceneEntity] = field(default_factory=list)
    origin_calibration: OriginCalibration = field(default_factory=OriginCalibration)
    style: StyleSpec | None = None
    revision: int = 0
    extra: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        seen: set[str] = set()
        for i, ent in enumerate(self.entities):
            if ent.id in seen:
                raise InvariantError(f"duplicate entity id {ent.id!r}", path=f"entities[{i}].id")
            seen.add(ent.id)
        wall_ids = {w.id for w in self.walls}
        for i, ent in enumerate(self.entities):
            if ent.kind in (EntityKind.DOOR, EntityKind.WINDOW):
                if ent.host_wall_id not in wall_ids:
                    raise InvariantError(
                        f"entity {ent.id!r} references unknown wall {ent.host_wall_id!r}",
                        path=f"entities[{i}].host_wall_id",
                    )

    def entity(self, entity_id: str) -> SceneEntity:
        for ent in self.entities:
            if ent.id == entity_id:
                return ent
        from roomforge.errors import UnknownEntity

        raise UnknownEntity(f"no entity with id {entity_id!r}")

    def wall(self, wall_id: str) -> WallSegment:
        for w in self.walls:
            if w.id == wall_id:
                return w
        from roomforge.errors import UnknownEntity

        raise UnknownEntity(f"no wall with id {wall_id!r}")

    def objects(self) -> list[SceneEntity]:
        return [e for e in self.entities if e.kind is EntityKind.OBJECT]

    def generation_targets(self) -> list[SceneEntity]:
        """Entities that receive per-object generated replicas."""
        return [
            e
            for e in self.entities
            if e.kind in (EntityKind.OBJECT, EntityKind.DOOR, EntityKind.WINDOW)
        ]

    def bump_revision(self) -> int:
        self.revision += 1
        return self.revision
