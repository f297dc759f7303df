"""Bounded-concurrency dispatcher over the generation backends.

Per-kind semaphores enforce the service budgets (2 stylized-image slots,
9 image-to-3D slots). Identical requests share one future, and completed
results are cached on disk by idempotency key, so re-submitting never
re-dispatches.
"""

from __future__ import annotations

import threading
from concurrent.futures import Future, ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from dataclasses import dataclass

from roomforge.errors import BackendError, GenerationTimeout
from roomforge.generation.requests import REQUEST_KINDS, AssetRecord, GenerationRequest
from roomforge.generation.store import AssetStore

DEFAULT_TIMEOUT_S = 300.0


@dataclass(frozen=True)
class ConcurrencyBudget:
    stylized_image_slots: int = 2
    image_to_3d_slots: int = 9
    other_slots: int = 4

    def slots_for(self, kind: str) -> int:
        if kind == "stylized-image":
            return self.stylized_image_slots
        if kind == "image-to-3d":
            return self.image_to_3d_slots
        return self.other_slots


class GenerationService:
    def __init__(
        self,
        store: AssetStore,
        backend,
        budget: ConcurrencyBudget | None = None,
        timeout_s: float = DEFAULT_TIMEOUT_S,
    ):
        self.store = store
        self.backend = backend
        self.budget = budget or ConcurrencyBudget()
        self.timeout_s = timeout_s
        workers = sum(self.budget.slots_for(kind) for kind in REQUEST_KINDS)
        self._executor = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="gen")
        self._semaphores = {
            kind: threading.Semaphore(self.budget.slots_for(kind)) for kind in REQUEST_KINDS
        }
        self._lock = threading.Lock()
        self._futures: dict[str, Future] = {}

    def submit(self, request: GenerationRequest) -> "Future[AssetRecord]":
        """Queue a request; it dispatches only when a slot for its kind is
        free. An identical idempotency key resolves to the cached record
        without touching the backend."""
        key = request.idempotency_key
        with self._lock:
            existing = self._futures.get(key)
            if existing is not None and not (existing.done() and existing.exception()):
                return existing
            cached = self.store.lookup_request(key)
            if cached is not None:
                done: Future = Future()
                done.set_result(cached)
                self._futures[key] = done
                return done
            future = self._executor.submit(self._run, request)
            self._futures[key] = future
            return future

    def _run(self, request: GenerationRequest) -> AssetRecord:
        with self._semaphores[request.kind]:
            record = self._call_with_retry(request)
        self.store.remember_request(request.idempotency_key, record.asset_id)
        return record

    def _call_with_retry(self, request: GenerationRequest) -> AssetRecord:
        try:
            return self.backend.generate(request)
        except BackendError:
            # one retry on transport errors only; rejection is final
            return self.backend.generate(request)

    def result(self, future: "Future[AssetRecord]", timeout_s: float | None = None) -> AssetRecord:
        try:
            return future.result(timeout=timeout_s if timeout_s is not None else self.timeout_s)
        except FutureTimeoutError:
            raise GenerationTimeout(f"generation did not finish within {self.timeout_s} s")

    def shutdown(self, wait: bool = True) -> None:
        self._executor.shutdown(wait=wait, cancel_futures=not wait)
