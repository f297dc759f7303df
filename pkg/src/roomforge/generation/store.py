"""Content-addressed asset store with atomic writes.

Layout: {root}/objects/{sha256}{ext} for payload bytes,
{root}/records/{asset_id}.json for metadata, and
{root}/requests/{idempotency_key}.json for the submit cache. Writes go
through a temp file + rename so concurrent readers never observe partial
assets, and a crash mid-write leaves no referenced garbage.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from pathlib import Path

from roomforge.errors import MissingAsset
from roomforge.generation.requests import AssetRecord


class AssetStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.objects_dir = self.root / "objects"
        self.records_dir = self.root / "records"
        self.requests_dir = self.root / "requests"
        for d in (self.objects_dir, self.records_dir, self.requests_dir):
            d.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()

    def _atomic_write(self, path: Path, data: bytes) -> None:
        tmp = path.parent / f".tmp-{uuid.uuid4().hex}"
        tmp.write_bytes(data)
        os.replace(tmp, path)

    def put(
        self,
        data: bytes,
        ext: str,
        kind: str,
        provenance: dict | None = None,
        extents: list[float] | None = None,
    ) -> AssetRecord:
        content_hash = hashlib.sha256(data).hexdigest()
        rel_path = f"objects/{content_hash}{ext}"
        record = AssetRecord(
            asset_id=content_hash,
            kind=kind,
            path=rel_path,
            content_hash=content_hash,
            provenance=provenance or {},
            extents=extents,
        )
        with self._lock:
            obj_path = self.root / rel_path
            if not obj_path.exists():
                self._atomic_write(obj_path, data)
            self._atomic_write(
                self.records_dir / f"{record.asset_id}.json",
                json.dumps(record.to_dict(), sort_keys=True, indent=2).encode("utf-8"),
            )
        return record

    def record(self, asset_id: str) -> AssetRecord:
        path = self.records_dir / f"{asset_id}.json"
        if not path.exists():
            raise MissingAsset(f"no asset record {asset_id!r}")
        return AssetRecord.from_dict(json.loads(path.read_text(encoding="utf-8")))

    def has(self, asset_id: str) -> bool:
        return (self.records_dir / f"{asset_id}.json").exists()

    def abs_path(self, record: AssetRecord | str) -> Path:
        if isinstance(record, str):
            record = self.record(record)
        return self.root / record.path

    def data(self, asset_id: str) -> bytes:
        record = self.record(asset_id)
        path = self.abs_path(record)
        if not path.exists():
            raise MissingAsset(f"asset payload missing for {asset_id!r}")
        return path.read_bytes()

    def verify(self, asset_id: str) -> bool:
        record = self.record(asset_id)
        path = self.abs_path(record)
        if not path.exists():
            return False
        return hashlib.sha256(path.read_bytes()).hexdigest() == record.content_hash

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.records_dir.glob("*.json"))

    # submit() idempotency cache

    def lookup_request(self, idempotency_key: str) -> AssetRecord | None:
        path = self.requests_dir / f"{idempotency_key}.json"
        if not path.exists():
            return None
        asset_id = json.loads(path.read_text(encoding="utf-8"))["asset_id"]
        return self.record(asset_id) if self.has(asset_id) else None

    def remember_request(self, idempotency_key: str, asset_id: str) -> None:
        self._atomic_write(
            self.requests_dir / f"{idempotency_key}.json",
            json.dumps({"asset_id": asset_id}).encode("utf-8"),
        )
