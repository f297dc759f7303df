"""Generation request/record value types and stable idempotency hashing."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from roomforge.errors import InvariantError

REQUEST_KINDS = ("llm", "stylized-image", "image-to-3d", "texture", "skybox")
ASSET_KINDS = ("image", "mesh", "texture-set", "panorama", "motion-playlist", "text")


def stable_hash(payload) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class GenerationRequest:
    kind: str
    payload: dict
    seed: int = 0

    def __post_init__(self):
        if self.kind not in REQUEST_KINDS:
            raise InvariantError(f"unknown generation kind {self.kind!r}")
        if not isinstance(self.payload, dict):
            raise InvariantError("payload must be a dict")

    @property
    def idempotency_key(self) -> str:
        return stable_hash({"kind": self.kind, "payload": self.payload, "seed": self.seed})

    def summary(self) -> dict:
        """Provenance summary carried on the produced asset."""
        return {"kind": self.kind, "seed": self.seed, "payload": self.payload}


@dataclass
class AssetRecord:
    asset_id: str
    kind: str
    path: str
    content_hash: str
    provenance: dict = field(default_factory=dict)
    extents: list[float] | None = None

    def __post_init__(self):
        if self.kind not in ASSET_KINDS:
            raise InvariantError(f"unknown asset kind {self.kind!r}")
        if self.kind == "mesh":
            if not self.extents or len(self.extents) != 3 or any(e <= 0 for e in self.extents):
                raise InvariantError("mesh assets must carry positive extents")

    def to_dict(self) -> dict:
        return {
            "asset_id": self.asset_id,
            "kind": self.kind,
            "path": self.path,
            "content_hash": self.content_hash,
            "provenance": self.provenance,
            "extents": self.extents,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "AssetRecord":
        return cls(
            asset_id=doc["asset_id"],
            kind=doc["kind"],
            path=doc["path"],
            content_hash=doc["content_hash"],
            provenance=doc.get("provenance", {}),
            extents=doc.get("extents"),
        )
