import io
import json
import struct
import threading

import pytest
from PIL import Image

from roomforge.errors import BackendError, ContentRejected, InvariantError, MissingInput
from roomforge.generation import (
    AssetStore,
    ConcurrencyBudget,
    GenerationRequest,
    GenerationService,
    MockBackend,
    box_glb,
    box_obj,
    loop_playlist,
    mesh_extents_from_hash,
)


@pytest.fixture()
def store(tmp_path) -> AssetStore:
    return AssetStore(tmp_path / "assets")


@pytest.fixture()
def backend(store) -> MockBackend:
    return MockBackend(store)


def image_request(prompt="a pirate sofa", seed=7) -> GenerationRequest:
    return GenerationRequest(kind="stylized-image", payload={"prompt": prompt}, seed=seed)


class TestStore:
    def test_content_hash_verifies(self, store):
        record = store.put(b"hello world", ".txt", "text")
        assert store.verify(record.asset_id)
        assert store.data(record.asset_id) == b"hello world"

    def test_records_survive_reopen(self, store, tmp_path):
        record = store.put(b"payload", ".txt", "text")
        again = AssetStore(tmp_path / "assets")
        assert again.record(record.asset_id).content_hash == record.content_hash

    def test_no_partial_files_visible(self, store):
        store.put(b"x" * 1024, ".bin", "text")
        leftovers = [p for p in store.objects_dir.iterdir() if p.name.startswith(".tmp")]
        assert leftovers == []


class TestMockStylizedImage:
    def test_deterministic_bytes(self, store, backend):
        a = backend.generate(image_request())
        b = backend.generate(image_request())
        assert a.content_hash == b.content_hash
        assert store.data(a.asset_id) == store.data(b.asset_id)

    def test_distinct_prompts_distinct_hashes(self, backend):
        prompts = ["sofa", "table", "curtains", "bookshelf", "lamp", "rug", "mirror"]
        hashes = {backend.generate(image_request(p)).content_hash for p in prompts}
        assert len(hashes) == len(prompts)

    def test_alpha_channel_present(self, store, backend):
        record = backend.generate(image_request())
        img = Image.open(io.BytesIO(store.data(record.asset_id)))
        assert img.mode == "RGBA"
        assert img.getpixel((0, 0))[3] == 0  # transparent background


class TestMockImageTo3d:
    def _mesh(self, store, backend, fmt="obj"):
        backend.mesh_format = fmt
        image = backend.generate(image_request())
        return backend.generate(
            GenerationRequest(kind="image-to-3d", payload={"image_asset_id": image.asset_id})
        ), image

    def test_extents_match_rederived_hash(self, store, backend):
        mesh, image = self._mesh(store, backend)
        assert mesh.extents == mesh_extents_from_hash(image.content_hash)

    def test_extents_clamped(self, store, backend):
        mesh, _ = self._mesh(store, backend)
        assert all(0.3 <= e <= 2.5 for e in mesh.extents)

    def test_obj_box_is_watertight(self, store, backend):
        mesh, _ = self._mesh(store, backend)
        text = store.data(mesh.asset_id).decode()
        verts = [l for l in text.splitlines() if l.startswith("v ")]
        faces = [l for l in text.splitlines() if l.startswith("f ")]
        assert len(verts) == 8
        assert len(faces) == 12
        edges: dict[tuple, int] = {}
        for line in faces:
            idx = [int(t) for t in line.split()[1:]]
            for a, b in ((0, 1), (1, 2), (2, 0)):
                e = tuple(sorted((idx[a], idx[b])))
                edges[e] = edges.get(e, 0) + 1
        assert all(count == 2 for count in edges.values())  # every edge shared twice

    def test_glb_header_and_json_chunk(self, store, backend):
        mesh, _ = self._mesh(store, backend, fmt="glb")
        blob = store.data(mesh.asset_id)
        magic, version, total = struct.unpack_from("<III", blob, 0)
        assert magic == 0x46546C67 and version == 2 and total == len(blob)
        json_len, json_type = struct.unpack_from("<II", blob, 12)
        assert json_type == 0x4E4F534A
        doc = json.loads(blob[20 : 20 + json_len].decode("utf-8"))
        assert doc["accessors"][0]["count"] == 8
        assert doc["accessors"][1]["count"] == 36

    def test_missing_input_image(self, backend):
        with pytest.raises(MissingInput):
            backend.generate(
                GenerationRequest(kind="image-to-3d", payload={"image_asset_id": "nope"})
            )


class TestMockTextureAndSkybox:
    def test_texture_tiles(self, store, backend):
        record = backend.generate(
            GenerationRequest(kind="texture", payload={"prompt": "planks", "role": "wall"})
        )
        manifest = json.loads(store.data(record.asset_id).decode())
        albedo = Image.open(io.BytesIO(store.data(manifest["albedo"])))
        w, h = albedo.size
        left = [albedo.getpixel((0, y)) for y in range(h)]
        right = [albedo.getpixel((w - 1, y)) for y in range(h)]
        assert left == right
        top = [albedo.getpixel((x, 0)) for x in range(w)]
        bottom = [albedo.getpixel((x, h - 1)) for x in range(w)]
        assert top == bottom

    def test_texture_set_complete(self, store, backend):
        record = backend.generate(
            GenerationRequest(kind="texture", payload={"prompt": "planks", "role": "floor"})
        )
        manifest = json.loads(store.data(record.asset_id).decode())
        for key in ("albedo", "normal", "metallic"):
            assert store.verify(manifest[key])

    def test_skybox_panorama_aspect_and_playlist(self, store, backend):
        record = backend.generate(
            GenerationRequest(
                kind="skybox",
                payload={"prompt": "sea", "negative_text": "", "duration_s": 10, "frame_rate": 24},
            )
        )
        doc = json.loads(store.data(record.asset_id).decode())
        pano = Image.open(io.BytesIO(store.data(doc["panorama_asset_id"])))
        assert pano.size[0] == 2 * pano.size[1]
        assert doc["frame_count"] == 240
        assert doc["playlist"] == loop_playlist(240)


class TestLoopPlaylist:
    def test_single_frame(self):
        assert loop_playlist(1) == [0]

    def test_three_frames(self):
        assert loop_playlist(3) == [0, 1, 2, 1]

    def test_period_and_seamlessness(self):
        for n in (2, 3, 4, 7, 24):
            playlist = loop_playlist(n)
            assert len(playlist) == 2 * n - 2
            doubled = playlist + playlist
            for a, b in zip(doubled, doubled[1:]):
                assert abs(a - b) == 1  # every step, wrap included, moves one frame

    def test_zero_rejected(self):
        with pytest.raises(InvariantError):
            loop_playlist(0)


class FlakyBackend:
    def __init__(self, inner, failures=1, error=BackendError):
        self.inner = inner
        self.failures = failures
        self.error = error
        self.calls = 0

    def generate(self, request):
        self.calls += 1
        if self.calls <= self.failures:
            raise self.error("transient")
        return self.inner.generate(request)


class TestDispatch:
    def test_budget_enforced_for_stylized_images(self, store):
        backend = MockBackend(store, latency_s=0.05)
        service = GenerationService(store, backend)
        futures = [service.submit(image_request(f"p{i}")) for i in range(10)]
        for f in futures:
            service.result(f)
        service.shutdown()
        assert backend.stats.max_inflight("stylized-image") == 2

    def test_mesh_budget_is_nine(self, store):
        backend = MockBackend(store, latency_s=0.05)
        service = GenerationService(store, backend)
        image = backend.generate(image_request())
        futures = [
            service.submit(
                GenerationRequest(
                    kind="image-to-3d",
                    payload={"image_asset_id": image.asset_id},
                    seed=i,
                )
            )
            for i in range(30)
        ]
        for f in futures:
            service.result(f)
        service.shutdown()
        assert backend.stats.max_inflight("image-to-3d") <= 9

    def test_idempotent_resubmit_skips_backend(self, store):
        backend = MockBackend(store)
        service = GenerationService(store, backend)
        first = service.result(service.submit(image_request()))
        calls_after_first = backend.stats.calls("stylized-image")
        second = service.result(service.submit(image_request()))
        service.shutdown()
        assert first.asset_id == second.asset_id
        assert backend.stats.calls("stylized-image") == calls_after_first

    def test_idempotency_survives_new_service(self, store):
        backend = MockBackend(store)
        service = GenerationService(store, backend)
        first = service.result(service.submit(image_request()))
        service.shutdown()
        fresh_backend = MockBackend(store)
        fresh = GenerationService(store, fresh_backend)
        second = fresh.result(fresh.submit(image_request()))
        fresh.shutdown()
        assert second.asset_id == first.asset_id
        assert fresh_backend.stats.calls("stylized-image") == 0

    def test_single_retry_on_transport_error(self, store):
        flaky = FlakyBackend(MockBackend(store), failures=1)
        service = GenerationService(store, flaky)
        record = service.result(service.submit(image_request()))
        service.shutdown()
        assert record.asset_id
        assert flaky.calls == 2

    def test_second_failure_propagates(self, store):
        flaky = FlakyBackend(MockBackend(store), failures=2)
        service = GenerationService(store, flaky)
        with pytest.raises(BackendError):
            service.result(service.submit(image_request()))
        service.shutdown()

    def test_rejection_not_retried(self, store):
        flaky = FlakyBackend(MockBackend(store), failures=5, error=ContentRejected)
        service = GenerationService(store, flaky)
        with pytest.raises(ContentRejected):
            service.result(service.submit(image_request()))
        service.shutdown()
        assert flaky.calls == 1

    def test_concurrent_identical_submits_share_future(self, store):
        backend = MockBackend(store, latency_s=0.05)
        service = GenerationService(store, backend)
        results = []

        def run():
            results.append(service.result(service.submit(image_request())))

        threads = [threading.Thread(target=run) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        service.shutdown()
        assert len({r.asset_id for r in results}) == 1
        assert backend.stats.calls("stylized-image") == 1
