"""Scene composition: run every per-kind registration branch and export the
deterministic composed-scene manifest."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from roomforge.bestview.select import camera_yaw_from_pose
from roomforge.compose.placement import (
    DOOR_THICKNESS_M,
    FloorPlacement,
    WallPanel,
    place_door_window,
    place_floor,
    place_walls,
)
from roomforge.compose.register import (
    FLIPS,
    GUARD_FACTOR,
    Registration,
    flip_extents,
    register_object,
    rotated_footprint_extents,
)
from roomforge.errors import BlockedByAttention, InvariantError, MissingAsset
from roomforge.generation.store import AssetStore
from roomforge.geometry.transforms import Sim3Transform
from roomforge.scene.io import dump_canonical_json
from roomforge.scene.model import EntityKind, ObjectStatus, SceneEntity, SceneModel

_PLACEABLE_STATUSES = (ObjectStatus.COMPLETE, ObjectStatus.CONFIRMED)
GUARD_TOLERANCE = 1e-6


@dataclass
class PlacedObject:
    """One registered asset: mesh transform plus the achieved IoU.

    Render transform: translate(translation) . rotate_z(yaw) .
    scale(per_axis_scale) . flip, applied to the raw mesh centered at its
    own origin.
    """

    entity_id: str
    asset_id: str
    translation: np.ndarray
    yaw: float
    flip: str
    per_axis_scale: np.ndarray
    achieved_iou: float

    def __post_init__(self):
        self.translation = np.asarray(self.translation, dtype=float).reshape(3)
        self.per_axis_scale = np.asarray(self.per_axis_scale, dtype=float).reshape(3)
        if self.flip not in FLIPS:
            raise InvariantError(f"unknown flip {self.flip!r}")
        if np.any(self.per_axis_scale <= 0):
            raise InvariantError("per_axis_scale must be positive")
        if not (0.0 <= self.achieved_iou <= 1.0):
            raise InvariantError("achieved_iou must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "entity_id": self.entity_id,
            "asset_id": self.asset_id,
            "translation": self.translation.tolist(),
            "yaw": self.yaw,
            "flip": self.flip,
            "per_axis_scale": self.per_axis_scale.tolist(),
            "achieved_iou": self.achieved_iou,
        }


@dataclass(frozen=True)
class SkyboxPlacement:
    asset_id: str
    panorama_asset_id: str
    playlist: list[int]

    def to_dict(self) -> dict:
        return {
            "asset_id": self.asset_id,
            "panorama_asset_id": self.panorama_asset_id,
            "playlist": list(self.playlist),
        }


@dataclass
class EnvironmentAssets:
    """Scene-level asset ids produced by the texture/skybox pipelines."""

    wall_texture_id: str
    floor_texture_id: str
    skybox_id: str
    audio_id: str | None = None

    def to_dict(self) -> dict:
        return {
            "wall_texture_id": self.wall_texture_id,
            "floor_texture_id": self.floor_texture_id,
            "skybox_id": self.skybox_id,
            "audio_id": self.audio_id,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "EnvironmentAssets":
        return cls(
            wall_texture_id=doc["wall_texture_id"],
            floor_texture_id=doc["floor_texture_id"],
            skybox_id=doc["skybox_id"],
            audio_id=doc.get("audio_id"),
        )


@dataclass
class ComposedScene:
    placed: list[PlacedObject]
    wall_panels: list[WallPanel]
    floor: FloorPlacement
    skybox: SkyboxPlacement
    source_revision: int
    audio: str | None = None

    def to_dict(self) -> dict:
        return {
            "placed": [p.to_dict() for p in self.placed],
            "walls": [
                {
                    "wall_id": p.wall_id,
                    "quad": [row.tolist() for row in p.quad],
                    "texture_asset_id": p.texture_asset_id,
                }
                for p in self.wall_panels
            ],
            "floor": {
                "polygon": [row.tolist() for row in self.floor.polygon],
                "texture_asset_id": self.floor.texture_asset_id,
                "base_z": self.floor.base_z,
                "tile_size_m": self.floor.tile_size_m,
            },
            "skybox": self.skybox.to_dict(),
            "audio": self.audio,
            "source_revision": self.source_revision,
        }

    def to_bytes(self) -> bytes:
        return dump_canonical_json(self.to_dict())


def _mesh_extents(store: AssetStore, entity: SceneEntity) -> np.ndarray:
    if not entity.asset_id:
        raise MissingAsset(f"entity {entity.id!r} has no generated asset")
    if not store.has(entity.asset_id):
        raise MissingAsset(f"asset {entity.asset_id!r} for entity {entity.id!r} is not in the store")
    record = store.record(entity.asset_id)
    if record.kind != "mesh" or not record.extents:
        raise MissingAsset(f"asset {entity.asset_id!r} for entity {entity.id!r} is not a mesh")
    return np.asarray(record.extents, dtype=float)


def _check_environment(store: AssetStore, environment: EnvironmentAssets) -> None:
    for name, asset_id in (
        ("wall texture", environment.wall_texture_id),
        ("floor texture", environment.floor_texture_id),
        ("skybox", environment.skybox_id),
    ):
        if not asset_id or not store.has(asset_id):
            raise MissingAsset(f"{name} asset {asset_id!r} is not in the store")


def _skybox_placement(store: AssetStore, skybox_id: str) -> SkyboxPlacement:
    record = store.record(skybox_id)
    if record.kind == "motion-playlist":
        doc = json.loads(store.data(skybox_id).decode("utf-8"))
        return SkyboxPlacement(
            asset_id=skybox_id,
            panorama_asset_id=str(doc["panorama_asset_id"]),
            playlist=[int(i) for i in doc["playlist"]],
        )
    if record.kind == "panorama":  # static panorama: a one-frame playlist
        return SkyboxPlacement(asset_id=skybox_id, panorama_asset_id=skybox_id, playlist=[0])
    raise MissingAsset(f"skybox asset {skybox_id!r} has kind {record.kind!r}")


def verify_placement(
    placed: PlacedObject, mesh_extents: np.ndarray, scaffold, tol: float = GUARD_TOLERANCE
) -> None:
    """Defensive re-check of the guard and grounding invariants."""
    candidate = placed.per_axis_scale * flip_extents(mesh_extents, placed.flip)
    delta = placed.yaw - scaffold.yaw
    world = np.array([*rotated_footprint_extents(candidate[:2], delta), candidate[2]])
    limit = GUARD_FACTOR * scaffold.size + tol
    if np.any(world > limit):
        raise InvariantError(
            f"{placed.entity_id}: extents {world.tolist()} exceed the guard {limit.tolist()}"
        )
    bottom = placed.translation[2] - candidate[2] / 2.0
    if placed.entity_id and abs(bottom - scaffold.bottom) > tol:
        raise InvariantError(
            f"{placed.entity_id}: bottom face {bottom} is off the scaffold bottom {scaffold.bottom}"
        )


def compose_scene(
    scene: SceneModel,
    store: AssetStore,
    environment: EnvironmentAssets,
    sim3: Sim3Transform | None = None,
    door_thickness: float = DOOR_THICKNESS_M,
) -> ComposedScene:
    """Register every generated entity into its scaffold and assemble the
    manifest. Pure in (scene, store contents, environment): identical inputs
    give byte-identical manifests.

    Raises BlockedByAttention while any red-flagged placement is
    unconfirmed; raises MissingAsset for entities without usable meshes.
    """
    flagged = sorted(
        e.id for e in scene.entities if e.status is ObjectStatus.NEEDS_ATTENTION
    )
    if flagged:
        raise BlockedByAttention(flagged)

    _check_environment(store, environment)

    placed: list[PlacedObject] = []
    for entity in scene.generation_targets():
        if entity.status not in _PLACEABLE_STATUSES:
            raise MissingAsset(
                f"entity {entity.id!r} is not generated yet (status {entity.status.value})"
            )
        extents = _mesh_extents(store, entity)

        if entity.kind is EntityKind.OBJECT:
            if entity.best_frame_pose is not None:
                theta_star = camera_yaw_from_pose(entity.best_frame_pose, sim3)
            else:
                theta_star = entity.box.yaw
            reg: Registration = register_object(extents, entity.box, theta_star)
            placement = PlacedObject(
                entity_id=entity.id,
                asset_id=entity.asset_id,
                translation=reg.translation,
                yaw=reg.yaw,
                flip=reg.flip,
                per_axis_scale=reg.per_axis_scale,
                achieved_iou=reg.achieved_iou,
            )
            verify_placement(placement, extents, entity.box)
        else:
            wall = scene.wall(entity.host_wall_id) if entity.host_wall_id else None
            dw = place_door_window(entity, wall, t0=door_thickness, mesh_extents=extents)
            placement = PlacedObject(
                entity_id=entity.id,
                asset_id=entity.asset_id,
                translation=dw.translation,
                yaw=dw.yaw,
                flip="none",
                per_axis_scale=dw.per_axis_scale,
                achieved_iou=dw.achieved_iou,
            )
        placed.append(placement)

    placed.sort(key=lambda p: p.entity_id)
    wall_panels = place_walls(scene, environment.wall_texture_id)
    floor = place_floor(scene, environment.floor_texture_id)
    skybox = _skybox_placement(store, environment.skybox_id)

    return ComposedScene(
        placed=placed,
        wall_panels=wall_panels,
        floor=floor,
        skybox=skybox,
        audio=environment.audio_id,
        source_revision=scene.revision,
    )
