"""REST surface of the authoring service."""

from __future__ import annotations

import base64
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from roomforge.errors import (
    BackendError,
    BlockedByAttention,
    IllegalTransition,
    InvariantError,
    MissingAsset,
    MissingHostWall,
    RoomforgeError,
    SchemaError,
    UnknownEntity,
    ValidationError,
)
from roomforge.scene.io import scene_to_dict
from roomforge.service.pipeline import regenerate, run_pipeline

_STATUS_BY_ERROR = {
    UnknownEntity: 404,
    MissingAsset: 409,
    MissingHostWall: 409,
    IllegalTransition: 409,
    BlockedByAttention: 409,
    InvariantError: 400,
    SchemaError: 400,
    ValidationError: 422,
    BackendError: 502,
}

_MEDIA_BY_EXT = {
    ".png": "image/png",
    ".json": "application/json",
    ".obj": "text/plain",
    ".glb": "model/gltf-binary",
    ".txt": "text/plain",
}


def _http_status(exc: RoomforgeError) -> int:
    for cls, status in _STATUS_BY_ERROR.items():
        if isinstance(exc, cls):
            return status
    return 400


def create_app(session, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="roomforge authoring service", version="0.1.0")

    @app.exception_handler(RoomforgeError)
    async def roomforge_error_handler(request: Request, exc: RoomforgeError):
        body = {"code": exc.code, "message": str(exc), "path": request.url.path}
        if isinstance(exc, BlockedByAttention):
            body["needs_attention"] = exc.entity_ids
        return JSONResponse(status_code=_http_status(exc), content=body)

    @app.get("/api/scene")
    def get_scene():
        return Response(content=session.scene_bytes(), media_type="application/json")

    @app.patch("/api/objects/{entity_id}")
    def patch_object(entity_id: str, patch: dict):
        entity = session.edit_scaffold(entity_id, patch)
        return _entity_body(entity, session)

    @app.post("/api/objects", status_code=201)
    def post_object(body: dict):
        box = body.get("box")
        if not isinstance(box, dict):
            raise SchemaError("body needs a box object", path="box")
        entity = session.add_scaffold(
            box=box,
            label=str(body.get("label", "object")),
            kind=str(body.get("kind", "object")),
            host_wall_id=body.get("host_wall_id"),
        )
        return _entity_body(entity, session)

    @app.delete("/api/objects/{entity_id}")
    def delete_object(entity_id: str):
        session.delete_scaffold(entity_id)
        return {"deleted": entity_id}

    @app.put("/api/style")
    def put_style(body: dict):
        text = str(body.get("text", ""))
        reference = body.get("reference_image")
        image_b64 = body.get("reference_image_b64")
        if image_b64:
            try:
                data = base64.b64decode(image_b64)
            except Exception:
                raise SchemaError("reference_image_b64 is not valid base64", path="reference_image_b64")
            record = session.store.put(data, ".png", "image", provenance={"kind": "style-reference"})
            reference = record.asset_id
        if not text.strip() and not reference:
            raise InvariantError("style needs text or a reference image")
        session.set_style(text, reference)
        return {"text": text, "reference_image": reference, "keywords": []}

    @app.post("/api/generate", status_code=202)
    def post_generate(body: dict | None = None):
        body = body or {}
        style_text = body.get("style_text")
        seed = body.get("seed")
        auto_confirm = bool(body.get("auto_confirm", False))
        run_id = session.next_run_id()

        def job():
            run_pipeline(session, style_text=style_text, seed=seed, auto_confirm=auto_confirm)

        session.submit_job(job)
        return {"run_id": run_id, "accepted": True}

    @app.get("/api/status")
    def get_status():
        return session.status_report()

    @app.post("/api/objects/{entity_id}/regenerate", status_code=202)
    def post_regenerate(entity_id: str, body: dict | None = None):
        instruction = str((body or {}).get("instruction", ""))
        return regenerate(session, entity_id, instruction)

    @app.post("/api/objects/{entity_id}/confirm")
    def post_confirm(entity_id: str):
        entity = session.confirm(entity_id)
        return _entity_body(entity, session)

    @app.get("/api/composed")
    def get_composed():
        return Response(content=session.composed_manifest(), media_type="application/json")

    @app.get("/api/assets/{asset_id}")
    def get_asset(asset_id: str):
        record = session.store.record(asset_id)
        path = session.store.abs_path(record)
        if not path.exists():
            raise MissingAsset(f"asset payload missing for {asset_id!r}")
        media = _MEDIA_BY_EXT.get(path.suffix, "application/octet-stream")
        return Response(content=path.read_bytes(), media_type=media)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def _entity_body(entity, session) -> dict:
    doc = scene_to_dict(session.scene)
    for ent in doc["entities"]:
        if ent["id"] == entity.id:
            return {"entity": ent, "revision": session.scene.revision}
    raise UnknownEntity(entity.id)
