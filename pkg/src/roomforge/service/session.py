"""Single-writer authoring session.

One directory per session: scene.json (live document, written atomically on
every mutation), scene.initial.json, events.jsonl (append-only command log),
track.json, environment.json, manifest.json, and the content-addressed
assets/ store. All mutations funnel through `apply`, which serializes
writers, validates the command against the live scene, logs it, and bumps
the revision; the log replayed over the initial scene reproduces the final
scene exactly.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from roomforge.bestview import CameraTrack, load_track, save_track, track_to_dict
from roomforge.compose import EnvironmentAssets, compose_scene
from roomforge.errors import (
    InvariantError,
    MissingAsset,
    UnknownEntity,
)
from roomforge.generation import (
    AssetStore,
    ConcurrencyBudget,
    GenerationService,
    make_backend,
    make_language_model,
)
from roomforge.scene import (
    EntityKind,
    ObjectStatus,
    OrientedBox,
    SceneEntity,
    SceneModel,
    advance_status,
    parse_scene,
    serialize_scene,
)
from roomforge.styling.types import MappingRow, StyleSpec

SCENE_FILE = "scene.json"
INITIAL_SCENE_FILE = "scene.initial.json"
EVENTS_FILE = "events.jsonl"
TRACK_FILE = "track.json"
ENVIRONMENT_FILE = "environment.json"
MANIFEST_FILE = "manifest.json"


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.parent / f".tmp-{uuid.uuid4().hex}"
    tmp.write_bytes(data)
    os.replace(tmp, path)


def apply_command(scene: SceneModel, cmd: dict) -> dict:
    """Apply one logged command to a scene in place. Returns a small result
    payload (ids, statuses) for the caller."""
    op = cmd["op"]

    if op == "edit_scaffold":
        entity = scene.entity(cmd["id"])
        patch = cmd["patch"]
        box = entity.box
        center = patch.get("center", box.center.tolist())
        size = patch.get("size", box.size.tolist())
        yaw = patch.get("yaw", box.yaw)
        entity.box = OrientedBox(center=center, size=size, yaw=yaw)
        if "label" in patch:
            entity.label = str(patch["label"])
        return {"id": entity.id}

    if op == "add_scaffold":
        if any(e.id == cmd["id"] for e in scene.entities):
            raise InvariantError(f"entity id {cmd['id']!r} already exists")
        box = cmd["box"]
        entity = SceneEntity(
            id=cmd["id"],
            kind=EntityKind(cmd.get("kind", "object")),
            label=cmd["label"],
            box=OrientedBox(center=box["center"], size=box["size"], yaw=box["yaw"]),
            host_wall_id=cmd.get("host_wall_id"),
        )
        if entity.kind in (EntityKind.DOOR, EntityKind.WINDOW):
            scene.wall(entity.host_wall_id)  # must resolve
        scene.entities.append(entity)
        return {"id": entity.id}

    if op == "delete_scaffold":
        target_id = cmd["id"]
        if any(w.id == target_id for w in scene.walls):
            dependents = [
                e.id
                for e in scene.entities
                if e.kind in (EntityKind.DOOR, EntityKind.WINDOW)
                and e.host_wall_id == target_id
            ]
            if dependents:
                raise InvariantError(
                    f"wall {target_id!r} still hosts {dependents}; delete them first"
                )
            scene.walls = [w for w in scene.walls if w.id != target_id]
            scene.entities = [e for e in scene.entities if e.id != target_id]
            return {"id": target_id}
        scene.entity(target_id)  # raises UnknownEntity
        scene.entities = [e for e in scene.entities if e.id != target_id]
        return {"id": target_id}

    if op == "set_status":
        entity = scene.entity(cmd["id"])
        advance_status(entity, ObjectStatus(cmd["to"]))
        return {"id": entity.id, "status": entity.status.value}

    if op == "set_style":
        scene.style = StyleSpec(
            raw_text=cmd.get("text", ""),
            reference_image=cmd.get("reference_image"),
            keywords=list(cmd.get("keywords", [])),
            degraded=bool(cmd.get("degraded", False)),
        )
        return {"keywords": list(scene.style.keywords)}

    if op == "set_mapping":
        entity = scene.entity(cmd["id"])
        entity.mapping = MappingRow.from_dict(cmd["row"])
        return {"id": entity.id}

    if op == "set_best_frame_pose":
        entity = scene.entity(cmd["id"])
        entity.best_frame_pose = np.asarray(cmd["pose"], dtype=float).reshape(4, 4)
        return {"id": entity.id}

    if op == "set_asset":
        entity = scene.entity(cmd["id"])
        entity.asset_id = cmd["asset_id"]
        return {"id": entity.id}

    raise InvariantError(f"unknown command op {op!r}")


def replay_events(initial: bytes, events: list[dict]) -> SceneModel:
    """Rebuild the final scene from the initial document plus the log."""
    scene = parse_scene(initial)
    for event in events:
        apply_command(scene, event["change"])
        scene.revision = event["revision"]
    return scene


class Session:
    def __init__(
        self,
        root: str | Path,
        backend_name: str | None = None,
        budget: ConcurrencyBudget | None = None,
        base_seed: int = 0,
        mock_latency_s: float | None = None,
        mesh_format: str = "obj",
    ):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._run_counter = 0
        self._generation_counters: dict[str, int] = {}
        self.stale_mappings: set[str] = set()
        self.base_seed = base_seed
        self.last_errors: dict[str, str] = {}

        self.store = AssetStore(self.root / "assets")
        if mock_latency_s is None:
            mock_latency_s = float(os.environ.get("ROOMFORGE_MOCK_LATENCY_MS", "0")) / 1000.0
        backend_kwargs = {}
        if (backend_name or os.environ.get("ROOMFORGE_BACKEND", "mock")) == "mock":
            backend_kwargs = {"latency_s": mock_latency_s, "mesh_format": mesh_format}
        self.backend = make_backend(self.store, backend_name, **backend_kwargs)
        self.generation = GenerationService(self.store, self.backend, budget)
        self.llm = make_language_model(self.backend, backend_name)
        self._jobs = ThreadPoolExecutor(max_workers=8, thread_name_prefix="session")
        self._pending_jobs: list = []
        self._manifest_cache: bytes | None = None

        self.scene: SceneModel = SceneModel()
        self.track: CameraTrack | None = None
        if (self.root / SCENE_FILE).exists():
            self._load_existing()

    # construction

    @classmethod
    def create(
        cls,
        root: str | Path,
        scene: SceneModel | bytes,
        track: CameraTrack | None = None,
        **kwargs,
    ) -> "Session":
        session = cls(root, **kwargs)
        if isinstance(scene, (bytes, bytearray)):
            scene = parse_scene(bytes(scene))
        session.scene = scene
        data = serialize_scene(scene)
        _atomic_write(session.root / SCENE_FILE, data)
        if not (session.root / INITIAL_SCENE_FILE).exists():
            _atomic_write(session.root / INITIAL_SCENE_FILE, data)
        if track is not None:
            session.set_track(track)
        return session

    def _load_existing(self) -> None:
        self.scene = parse_scene((self.root / SCENE_FILE).read_bytes())
        track_path = self.root / TRACK_FILE
        if track_path.exists():
            self.track = load_track(track_path)

    def set_track(self, track: CameraTrack) -> None:
        with self._lock:
            self.track = track
            save_track(track, self.root / TRACK_FILE)

    # single-writer command funnel

    def apply(self, cmd: dict, actor: str = "api") -> dict:
        """Validate, apply, log, persist. The only way the scene mutates."""
        with self._lock:
            result = apply_command(self.scene, cmd)
            revision = self.scene.bump_revision()
            event = {
                "revision": revision,
                "actor": actor,
                "change": cmd,
                "ts": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            }
            with open(self.root / EVENTS_FILE, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")
            _atomic_write(self.root / SCENE_FILE, serialize_scene(self.scene))
            self._invalidate_manifest()
            if cmd["op"] == "edit_scaffold" and "label" in cmd.get("patch", {}):
                entity = self.scene.entity(cmd["id"])
                if entity.mapping is not None:
                    self.stale_mappings.add(entity.id)
            return result

    def events(self) -> list[dict]:
        path = self.root / EVENTS_FILE
        if not path.exists():
            return []
        return [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]

    def initial_scene_bytes(self) -> bytes:
        path = self.root / INITIAL_SCENE_FILE
        return path.read_bytes() if path.exists() else serialize_scene(SceneModel())

    def scene_bytes(self) -> bytes:
        with self._lock:
            return serialize_scene(self.scene)

    # scaffold editing operations

    def edit_scaffold(self, entity_id: str, patch: dict) -> SceneEntity:
        allowed = {"center", "size", "yaw", "label"}
        unknown = set(patch) - allowed
        if unknown:
            raise InvariantError(f"unknown patch fields {sorted(unknown)}")
        self.apply({"op": "edit_scaffold", "id": entity_id, "patch": patch})
        return self.scene.entity(entity_id)

    def add_scaffold(
        self,
        box: dict,
        label: str,
        kind: str = "object",
        host_wall_id: str | None = None,
        entity_id: str | None = None,
    ) -> SceneEntity:
        with self._lock:
            if entity_id is None:
                existing = {e.id for e in self.scene.entities}
                n = 0
                while f"obj_new_{n}" in existing:
                    n += 1
                entity_id = f"obj_new_{n}"
            self.apply(
                {
                    "op": "add_scaffold",
                    "id": entity_id,
                    "label": label,
                    "kind": kind,
                    "box": box,
                    "host_wall_id": host_wall_id,
                }
            )
            return self.scene.entity(entity_id)

    def delete_scaffold(self, entity_id: str) -> None:
        with self._lock:
            self.apply({"op": "delete_scaffold", "id": entity_id})
            # invalidate any in-flight generation for the deleted entity
            self._generation_counters[entity_id] = (
                self._generation_counters.get(entity_id, 0) + 1
            )

    def confirm(self, entity_id: str) -> SceneEntity:
        self.apply({"op": "set_status", "id": entity_id, "to": "confirmed"})
        return self.scene.entity(entity_id)

    def set_style(self, text: str, reference_image: str | None = None) -> None:
        self.apply(
            {"op": "set_style", "text": text, "reference_image": reference_image, "keywords": []}
        )

    # generation bookkeeping

    def generation_of(self, entity_id: str) -> int:
        with self._lock:
            return self._generation_counters.get(entity_id, 0)

    def next_generation(self, entity_id: str) -> int:
        with self._lock:
            self._generation_counters[entity_id] = self._generation_counters.get(entity_id, 0) + 1
            return self._generation_counters[entity_id]

    def next_run_id(self) -> str:
        with self._lock:
            self._run_counter += 1
            return f"run-{self._run_counter:04d}"

    def submit_job(self, fn, *args) -> None:
        future = self._jobs.submit(fn, *args)
        with self._lock:
            self._pending_jobs = [f for f in self._pending_jobs if not f.done()]
            self._pending_jobs.append(future)

    def wait_idle(self, timeout_s: float = 120.0) -> None:
        """Block until background jobs finish; surfaces their exceptions."""
        while True:
            with self._lock:
                pending = [f for f in self._pending_jobs if not f.done()]
                self._pending_jobs = pending
            if not pending:
                return
            pending[0].result(timeout=timeout_s)

    # environment + manifest

    def save_environment(self, environment: EnvironmentAssets) -> None:
        _atomic_write(
            self.root / ENVIRONMENT_FILE,
            json.dumps(environment.to_dict(), sort_keys=True, indent=2).encode("utf-8"),
        )

    def load_environment(self) -> EnvironmentAssets:
        path = self.root / ENVIRONMENT_FILE
        if not path.exists():
            raise MissingAsset("no environment assets; run the pipeline first")
        return EnvironmentAssets.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def _invalidate_manifest(self) -> None:
        self._manifest_cache = None

    def composed_manifest(self) -> bytes:
        """Compose (or serve the cached composition of) the current scene."""
        with self._lock:
            if self._manifest_cache is not None:
                return self._manifest_cache
            environment = self.load_environment()
            sim3 = self.track.sim3 if self.track is not None else None
            composed = compose_scene(self.scene, self.store, environment, sim3=sim3)
            data = composed.to_bytes()
            _atomic_write(self.root / MANIFEST_FILE, data)
            self._manifest_cache = data
            return data

    # status

    def status_report(self) -> dict:
        with self._lock:
            entities = []
            for e in self.scene.entities:
                entities.append(
                    {
                        "id": e.id,
                        "kind": e.kind.value,
                        "label": e.label,
                        "status": e.status.value,
                        "asset_id": e.asset_id,
                        "prompt": e.mapping.appearance_prompt if e.mapping else None,
                        "replica": e.mapping.replica if e.mapping else None,
                        "collision_risk": e.mapping.collision_risk if e.mapping else None,
                        "mapping_stale": e.id in self.stale_mappings,
                        "error": self.last_errors.get(e.id),
                    }
                )
            return {"revision": self.scene.revision, "entities": entities}

    def close(self) -> None:
        self._jobs.shutdown(wait=True)
        self.generation.shutdown()
