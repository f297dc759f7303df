import os

from .requests import ASSET_KINDS, REQUEST_KINDS, AssetRecord, GenerationRequest, stable_hash
from .store import AssetStore
from .dispatch import DEFAULT_TIMEOUT_S, ConcurrencyBudget, GenerationService
from .mocks import InflightStats, MockBackend, MockLanguageModel, mesh_extents_from_hash
from .playlist import loop_playlist
from .meshes import box_glb, box_obj


def make_backend(store: AssetStore, name: str | None = None, **kwargs):
    """Backend factory honoring ROOMFORGE_BACKEND (mock|live)."""
    name = name or os.environ.get("ROOMFORGE_BACKEND", "mock")
    if name == "mock":
        return MockBackend(store, **kwargs)
    if name == "live":
        from .live import LiveBackend

        return LiveBackend(store, **kwargs)
    raise ValueError(f"unknown backend {name!r}; expected mock or live")


def make_language_model(backend=None, name: str | None = None):
    name = name or os.environ.get("ROOMFORGE_BACKEND", "mock")
    if name == "mock":
        if backend is not None and hasattr(backend, "llm"):
            return backend.llm
        return MockLanguageModel()
    from .live import LiveLanguageModel

    return LiveLanguageModel()


__all__ = [
    "ASSET_KINDS",
    "REQUEST_KINDS",
    "AssetRecord",
    "AssetStore",
    "ConcurrencyBudget",
    "DEFAULT_TIMEOUT_S",
    "GenerationRequest",
    "GenerationService",
    "InflightStats",
    "MockBackend",
    "MockLanguageModel",
    "box_glb",
    "box_obj",
    "loop_playlist",
    "make_backend",
    "make_language_model",
    "mesh_extents_from_hash",
    "stable_hash",
]
