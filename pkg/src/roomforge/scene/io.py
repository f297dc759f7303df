"""Parser, validator, and canonical serializer for the scene document.

Serialization is canonical (sorted keys, floats quantized to 6 decimals,
2-space indent, trailing newline) so that field-equal scenes produce
byte-identical documents; the end-to-end determinism checks rely on this.
Unknown fields are preserved opaquely and round-trip untouched apart from
the same canonical formatting.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from roomforge.errors import InvariantError, SchemaError
from roomforge.scene.model import (
    EntityKind,
    ObjectStatus,
    OrientedBox,
    OriginCalibration,
    SceneEntity,
    SceneModel,
    WallSegment,
)
from roomforge.styling.types import MappingRow, StyleSpec

FLOAT_DECIMALS = 6

_ENTITY_FIELDS = {
    "id",
    "kind",
    "label",
    "box",
    "host_wall_id",
    "status",
    "best_frame_pose",
    "mapping",
    "asset_id",
}
_WALL_FIELDS = {"id", "a", "b", "height", "thickness"}
_SCENE_FIELDS = {"origin_calibration", "style", "walls", "entities", "revision"}


def canonical_float(x: float) -> float:
    r = round(float(x), FLOAT_DECIMALS)
    return 0.0 if r == 0 else r


def _canonicalize(value: Any) -> Any:
    if isinstance(value, float):
        return canonical_float(value)
    if isinstance(value, dict):
        return {k: _canonicalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonicalize(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_canonicalize(float(v)) for v in value.ravel()]
    if isinstance(value, (np.floating,)):
        return canonical_float(float(value))
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def dump_canonical_json(payload: Any) -> bytes:
    """Canonical JSON bytes shared by scene documents and composed manifests."""
    text = json.dumps(_canonicalize(payload), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def _expect(doc: dict, key: str, types, path: str, optional: bool = False):
    if key not in doc:
        if optional:
            return None
        raise SchemaError(f"missing required field {key!r}", path=path)
    value = doc[key]
    if value is None and optional:
        return None
    if not isinstance(value, types):
        raise SchemaError(
            f"field {key!r} has type {type(value).__name__}, expected {types}",
            path=f"{path}.{key}",
        )
    return value


def _vec3(value, path: str) -> np.ndarray:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise SchemaError("expected a 3-vector", path=path)
    if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        raise SchemaError("3-vector components must be numbers", path=path)
    return np.asarray(value, dtype=float)


def _parse_box(doc, path: str) -> OrientedBox:
    if not isinstance(doc, dict):
        raise SchemaError("box must be an object", path=path)
    center = _vec3(_expect(doc, "center", (list, tuple), path), f"{path}.center")
    size = _vec3(_expect(doc, "size", (list, tuple), path), f"{path}.size")
    yaw = _expect(doc, "yaw", (int, float), path)
    try:
        return OrientedBox(center=center, size=size, yaw=float(yaw))
    except InvariantError as exc:
        raise InvariantError(str(exc), path=f"{path}.size") from exc


def _parse_wall(doc, i: int) -> WallSegment:
    path = f"walls[{i}]"
    if not isinstance(doc, dict):
        raise SchemaError("wall must be an object", path=path)
    wall = WallSegment(
        id=str(_expect(doc, "id", str, path)),
        a=_vec3(_expect(doc, "a", (list, tuple), path), f"{path}.a"),
        b=_vec3(_expect(doc, "b", (list, tuple), path), f"{path}.b"),
        height=float(_expect(doc, "height", (int, float), path)),
        thickness=float(_expect(doc, "thickness", (int, float), path)),
    )
    wall.extra = {k: v for k, v in doc.items() if k not in _WALL_FIELDS}
    return wall


def _parse_entity(doc, i: int) -> SceneEntity:
    path = f"entities[{i}]"
    if not isinstance(doc, dict):
        raise SchemaError("entity must be an object", path=path)
    kind_raw = _expect(doc, "kind", str, path)
    try:
        kind = EntityKind(kind_raw)
    except ValueError:
        raise SchemaError(f"unknown entity kind {kind_raw!r}", path=f"{path}.kind")
    status_raw = _expect(doc, "status", str, path)
    try:
        status = ObjectStatus(status_raw)
    except ValueError:
        raise SchemaError(f"unknown status {status_raw!r}", path=f"{path}.status")

    pose = _expect(doc, "best_frame_pose", (list, tuple), path, optional=True)
    if pose is not None:
        if len(pose) != 16:
            raise SchemaError("best_frame_pose must have 16 row-major floats", path=f"{path}.best_frame_pose")
        pose = np.asarray(pose, dtype=float).reshape(4, 4)

    mapping_doc = _expect(doc, "mapping", dict, path, optional=True)
    mapping = None
    if mapping_doc is not None:
        try:
            mapping = MappingRow.from_dict(mapping_doc)
        except KeyError as exc:
            raise SchemaError(f"mapping row missing column {exc}", path=f"{path}.mapping")

    try:
        entity = SceneEntity(
            id=str(_expect(doc, "id", str, path)),
            kind=kind,
            label=str(_expect(doc, "label", str, path)),
            box=_parse_box(_expect(doc, "box", dict, path), f"{path}.box"),
            host_wall_id=_expect(doc, "host_wall_id", str, path, optional=True),
            status=status,
            best_frame_pose=pose,
            mapping=mapping,
            asset_id=_expect(doc, "asset_id", str, path, optional=True),
        )
    except InvariantError as exc:
        if not exc.path:
            raise InvariantError(str(exc), path=path) from exc
        raise
    entity.extra = {k: v for k, v in doc.items() if k not in _ENTITY_FIELDS}
    return entity


def scene_from_dict(doc: dict) -> SceneModel:
    if not isinstance(doc, dict):
        raise SchemaError("scene document must be a JSON object", path="$")

    calib_doc = _expect(doc, "origin_calibration", dict, "$")
    calibration = OriginCalibration(
        position=_vec3(
            _expect(calib_doc, "position", (list, tuple), "origin_calibration"),
            "origin_calibration.position",
        ),
        yaw=float(_expect(calib_doc, "yaw", (int, float), "origin_calibration")),
    )

    style_doc = _expect(doc, "style", dict, "$", optional=True)
    style = None
    if style_doc is not None:
        keywords = style_doc.get("keywords") or []
        if not isinstance(keywords, list):
            raise SchemaError("style.keywords must be a list", path="style.keywords")
        style = StyleSpec(
            raw_text=str(style_doc.get("text", "")),
            reference_image=style_doc.get("reference_image"),
            keywords=[str(k) for k in keywords],
            degraded=bool(style_doc.get("degraded", False)),
        )

    walls_doc = _expect(doc, "walls", list, "$")
    entities_doc = _expect(doc, "entities", list, "$")
    revision = _expect(doc, "revision", int, "$")

    scene = SceneModel(
        walls=[_parse_wall(w, i) for i, w in enumerate(walls_doc)],
        entities=[_parse_entity(e, i) for i, e in enumerate(entities_doc)],
        origin_calibration=calibration,
        style=style,
        revision=int(revision),
    )
    scene.extra = {k: v for k, v in doc.items() if k not in _SCENE_FIELDS}
    return scene


def parse_scene(document: bytes | str) -> SceneModel:
    """Parse a UTF-8 scene document, enforcing schema and invariants."""
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"document is not UTF-8: {exc}", path="$")
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"document is not valid JSON: {exc}", path="$")
    return scene_from_dict(doc)


def _style_to_dict(style: StyleSpec | None):
    if style is None:
        return None
    out = {
        "text": style.raw_text,
        "keywords": list(style.keywords),
        "reference_image": style.reference_image,
    }
    if style.degraded:
        out["degraded"] = True
    return out


def _entity_to_dict(ent: SceneEntity) -> dict:
    out = dict(ent.extra)
    out.update(
        {
            "id": ent.id,
            "kind": ent.kind.value,
            "label": ent.label,
            "box": {
                "center": ent.box.center.tolist(),
                "size": ent.box.size.tolist(),
                "yaw": ent.box.yaw,
            },
            "host_wall_id": ent.host_wall_id,
            "status": ent.status.value,
            "best_frame_pose": None
            if ent.best_frame_pose is None
            else [float(v) for v in np.asarray(ent.best_frame_pose).ravel()],
            "mapping": None if ent.mapping is None else ent.mapping.to_dict(),
            "asset_id": ent.asset_id,
        }
    )
    return out


def scene_to_dict(scene: SceneModel) -> dict:
    out = dict(scene.extra)
    out.update(
        {
            "origin_calibration": {
                "position": scene.origin_calibration.position.tolist(),
                "yaw": scene.origin_calibration.yaw,
            },
            "style": _style_to_dict(scene.style),
            "walls": [
                {**w.extra, "id": w.id, "a": w.a.tolist(), "b": w.b.tolist(),
                 "height": w.height, "thickness": w.thickness}
                for w in scene.walls
            ],
            "entities": [_entity_to_dict(e) for e in scene.entities],
            "revision": scene.revision,
        }
    )
    return out


def serialize_scene(scene: SceneModel) -> bytes:
    """Serialize to canonical UTF-8 JSON bytes."""
    return dump_canonical_json(scene_to_dict(scene))
