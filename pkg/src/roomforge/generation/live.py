"""Thin HTTP adapters for live generation services.

Configured entirely by environment variables and excluded from the
acceptance suite; the mock backend is the tested path.

    ROOMFORGE_BACKEND=live
    ROOMFORGE_LLM_URL / ROOMFORGE_LLM_KEY      chat completion endpoint
    ROOMFORGE_IMG_URL / ROOMFORGE_IMG_KEY      stylized image + textures
    ROOMFORGE_MESH_URL / ROOMFORGE_MESH_KEY    image-to-3D conversion
    ROOMFORGE_SKY_URL / ROOMFORGE_SKY_KEY      skybox panorama + motion

Each endpoint receives a JSON POST of the request payload and must return
the asset bytes; 4xx responses map to ContentRejected, everything else
transport-ish to BackendError.
"""

from __future__ import annotations

import os

import httpx

from roomforge.errors import BackendError, ContentRejected
from roomforge.generation.requests import AssetRecord, GenerationRequest
from roomforge.generation.store import AssetStore

_ENV_BY_KIND = {
    "llm": "LLM",
    "stylized-image": "IMG",
    "texture": "IMG",
    "image-to-3d": "MESH",
    "skybox": "SKY",
}

_EXT_BY_CONTENT_TYPE = {
    "image/png": ".png",
    "model/gltf-binary": ".glb",
    "application/json": ".json",
    "text/plain": ".txt",
}

_ASSET_KIND = {
    "llm": "text",
    "stylized-image": "image",
    "texture": "texture-set",
    "image-to-3d": "mesh",
    "skybox": "motion-playlist",
}


def _endpoint(kind: str) -> tuple[str, str | None]:
    name = _ENV_BY_KIND[kind]
    url = os.environ.get(f"ROOMFORGE_{name}_URL")
    if not url:
        raise BackendError(f"ROOMFORGE_{name}_URL is not configured for kind {kind!r}")
    return url, os.environ.get(f"ROOMFORGE_{name}_KEY")


class LiveBackend:
    def __init__(self, store: AssetStore, timeout_s: float = 300.0):
        self.store = store
        self.timeout_s = timeout_s

    def generate(self, request: GenerationRequest) -> AssetRecord:
        url, key = _endpoint(request.kind)
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        try:
            resp = httpx.post(
                url,
                json={"kind": request.kind, "seed": request.seed, **request.payload},
                headers=headers,
                timeout=self.timeout_s,
            )
        except httpx.HTTPError as exc:
            raise BackendError(f"{request.kind} backend unreachable: {exc}")
        if 400 <= resp.status_code < 500:
            raise ContentRejected(f"{request.kind} backend refused: HTTP {resp.status_code}")
        if resp.status_code != 200:
            raise BackendError(f"{request.kind} backend failed: HTTP {resp.status_code}")
        content_type = resp.headers.get("content-type", "").split(";")[0].strip()
        ext = _EXT_BY_CONTENT_TYPE.get(content_type, ".bin")
        extents = None
        if request.kind == "image-to-3d":
            try:
                extents = [float(v) for v in resp.headers.get("x-mesh-extents", "").split(",")]
            except ValueError:
                raise BackendError("image-to-3d backend did not report mesh extents")
        return self.store.put(
            resp.content,
            ext,
            _ASSET_KIND[request.kind],
            provenance=request.summary(),
            extents=extents,
        )


class LiveLanguageModel:
    """Chat adapter matching the styling module's client protocol."""

    def __init__(self, timeout_s: float = 120.0):
        self.timeout_s = timeout_s

    def complete(self, system: str, user: str, images: list[str] | None = None) -> str:
        url, key = _endpoint("llm")
        headers = {"Authorization": f"Bearer {key}"} if key else {}
        try:
            resp = httpx.post(
                url,
                json={"system": system, "user": user, "images": images or []},
                headers=headers,
                timeout=self.timeout_s,
            )
        except httpx.HTTPError as exc:
            raise BackendError(f"llm backend unreachable: {exc}")
        if resp.status_code != 200:
            raise BackendError(f"llm backend failed: HTTP {resp.status_code}")
        try:
            return str(resp.json()["text"])
        except (KeyError, ValueError) as exc:
            raise BackendError(f"llm backend returned an unusable body: {exc}")
