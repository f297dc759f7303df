"""Deterministic mock backends for every generation capability.

The mocks are the tested path: byte-stable outputs derived from
(prompt, seed) hashes, with enough structure (alpha channels, tileable
edges, box meshes with derived extents, 2:1 panoramas) for the full
pipeline and registration stages to run end to end.
"""

from __future__ import annotations

import hashlib
import io
import json
import re
import threading
import time

from PIL import Image, ImageDraw

from roomforge.errors import InvariantError, MissingInput
from roomforge.generation.meshes import box_glb, box_obj
from roomforge.generation.playlist import loop_playlist
from roomforge.generation.requests import AssetRecord, GenerationRequest
from roomforge.generation.store import AssetStore

MESH_EXTENT_MIN = 0.3
MESH_EXTENT_MAX = 2.5


def _digest(*parts) -> bytes:
    h = hashlib.sha256()
    for p in parts:
        h.update(str(p).encode("utf-8"))
        h.update(b"\x00")
    return h.digest()


def mesh_extents_from_hash(content_hash: str) -> list[float]:
    """Per-axis extents in [0.3, 2.5] m, derived from the input image hash."""
    extents = []
    for axis in range(3):
        d = _digest(content_hash, "extent", axis)
        t = int.from_bytes(d[:4], "big") / 0xFFFFFFFF
        extents.append(MESH_EXTENT_MIN + t * (MESH_EXTENT_MAX - MESH_EXTENT_MIN))
    return extents


def _png_bytes(img: Image.Image) -> bytes:
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


class InflightStats:
    """Thread-safe per-kind in-flight counters used by the budget tests."""

    def __init__(self):
        self._lock = threading.Lock()
        self._current: dict[str, int] = {}
        self._max: dict[str, int] = {}
        self._calls: dict[str, int] = {}

    def enter(self, kind: str) -> None:
        with self._lock:
            cur = self._current.get(kind, 0) + 1
            self._current[kind] = cur
            self._max[kind] = max(self._max.get(kind, 0), cur)
            self._calls[kind] = self._calls.get(kind, 0) + 1

    def exit(self, kind: str) -> None:
        with self._lock:
            self._current[kind] = self._current.get(kind, 0) - 1

    def max_inflight(self, kind: str) -> int:
        with self._lock:
            return self._max.get(kind, 0)

    def calls(self, kind: str) -> int:
        with self._lock:
            return self._calls.get(kind, 0)


class MockLanguageModel:
    """Rule-driven stand-in for the chat backend.

    Replies are pure functions of the prompt text, so pipeline runs are
    reproducible. Style replies follow the extraction prompt's documented
    examples; mapping replies build a full table from the detected-object
    line embedded in the prompt.
    """

    _KNOWN_STYLES = {
        "plants vs": "Plants vs. Zombies, Cartoonish, Whimsical, Bright Green, Wooden Fence, Vibrant Colors, Playful Garden, Pop Art",
        "pirate": "Pirates of the Caribbean, Nautical, Rustic Wood, Weathered Canvas, Aged Bronze, Dark Ocean Blue, Caribbean Colonial, Medieval Ship",
        "caribbean": "Pirates of the Caribbean, Nautical, Rustic Wood, Weathered Canvas, Aged Bronze, Dark Ocean Blue, Caribbean Colonial, Medieval Ship",
        "cyberpunk": "Cyberpunk, Neon Lights, Chrome Metal, Electric Blue, Hot Pink, Futuristic, High-tech, Dystopian Urban",
        "gothic": "Dark Gothic, Black Stone, Ironwork, Candlelight, Stained Glass, White Curtains, Medieval Architecture, Dramatic Shadows",
    }

    _MATERIALS = [
        "Brushed Brass", "Dark Walnut", "Polished Marble", "Aged Leather",
        "Matte Ceramic", "Hammered Copper", "Frosted Glass", "Woven Rattan",
    ]
    _COLORS = [
        "Deep Teal", "Warm Amber", "Charcoal Gray", "Ivory White",
        "Burnt Sienna", "Forest Green", "Midnight Blue", "Dusty Rose",
    ]

    _SAFE_LABELS = {
        "curtain", "curtains", "window", "door", "blinds", "drape", "drapes",
        "painting", "picture", "poster", "mirror", "clock", "rug", "carpet",
        "tapestry", "wall art",
    }

    _FUNCTIONS = {
        "sofa": "seating", "couch": "seating", "chair": "seating", "armchair": "seating",
        "stool": "seating", "bench": "seating", "bed": "sleeping",
        "table": "surface for placing items", "desk": "work surface",
        "coffee table": "surface for placing items", "nightstand": "surface for placing items",
        "shelf": "storage", "bookshelf": "storage", "cabinet": "storage",
        "wardrobe": "storage", "dresser": "storage", "refrigerator": "cold storage",
        "fridge": "cold storage", "tv": "display", "television": "display",
        "monitor": "display", "lamp": "lighting", "light": "lighting",
        "plant": "decoration", "curtains": "window covering", "curtain": "window covering",
        "door": "passage", "window": "daylight opening", "rug": "floor covering",
        "carpet": "floor covering", "mirror": "reflection", "air conditioner": "temperature regulation",
        "heater": "temperature regulation", "fireplace": "temperature regulation",
    }

    def complete(self, system: str, user: str, images: list[str] | None = None) -> str:
        if "style-extraction assistant" in system:
            return self._style_reply(user)
        if "VR scene design assistant" in user:
            return self._mapping_reply(user)
        return f"ack: {user[:120]}"

    # style extraction

    def _style_reply(self, text: str) -> str:
        cleaned = text.strip()
        if not cleaned:
            return "Modern Minimalist"
        lowered = cleaned.lower()
        for marker, reply in self._KNOWN_STYLES.items():
            if marker in lowered:
                return reply
        base = re.sub(r"^(i want to|i want|please|make|turn)\b", "", lowered).strip()
        base = re.sub(r"\b(the room into a?|the room in|room into|style)\b", " ", base)
        base = " ".join(w.capitalize() for w in base.split()) or "Modern Minimalist"
        d = _digest("style", lowered)
        picks = [
            self._MATERIALS[d[0] % len(self._MATERIALS)],
            self._COLORS[d[1] % len(self._COLORS)],
            self._MATERIALS[d[2] % len(self._MATERIALS)],
            self._COLORS[d[3] % len(self._COLORS)],
            "Soft Ambient Glow" if d[4] % 2 else "Weathered Patina",
        ]
        keywords = [base]
        for p in picks:
            if p not in keywords:
                keywords.append(p)
        return ", ".join(keywords[:6])

    # mapping table

    def _mapping_reply(self, prompt: str) -> str:
        style_m = re.findall(r"User's expected style keywords: (.*)", prompt)
        objects_m = re.findall(r"Detected real-world objects \(object_id:label\): (.*)", prompt)
        style_line = style_m[-1].strip() if style_m else "Modern Minimalist"
        objects_line = objects_m[-1].strip() if objects_m else ""
        keywords = [k.strip() for k in style_line.split(",") if k.strip()]
        theme = keywords[0] if keywords else "Modern Minimalist"

        rows = []
        for pair in objects_line.split(", "):
            if ":" not in pair:
                continue
            obj_id, label = pair.split(":", 1)
            function = self._function_for(label)
            replica = f"{theme}-themed {label}"
            rows.append(
                [
                    obj_id,
                    label,
                    function,
                    replica,
                    function,
                    self._appearance(label, replica, function, keywords),
                    self._collision_risk(label),
                ]
            )

        kw = keywords + ["Modern Minimalist", "Soft Ambient Glow"]
        table = {
            "objects": rows,
            "skybox": {
                "prompt": f"Panoramic {theme} environment wrapping the room, coherent distant horizon, {kw[1]} atmosphere",
                "negative_text": "text, watermark, people, modern logos",
            },
            "wall_texture": {
                "prompt": f"{theme} wall surface with {kw[1]} detailing, subtle and evenly lit"
            },
            "floor_texture": {
                "prompt": f"{theme} floor material with gentle wear, {kw[2 % len(kw)]} undertones"
            },
        }
        return json.dumps(table, sort_keys=True)

    def _function_for(self, label: str) -> str:
        lowered = label.lower().strip()
        if lowered in self._FUNCTIONS:
            return self._FUNCTIONS[lowered]
        for key, fn in self._FUNCTIONS.items():
            if key in lowered:
                return fn
        return "general furnishing"

    def _collision_risk(self, label: str) -> bool:
        lowered = label.lower().strip()
        if lowered in self._SAFE_LABELS:
            return False
        return not any(safe in lowered for safe in self._SAFE_LABELS)

    def _appearance(self, label: str, replica: str, function: str, keywords: list[str]) -> str:
        kws = keywords or ["Modern Minimalist"]

        def kw(i: int) -> str:
            return kws[i % len(kws)]

        sentences = [
            f"A {label} reimagined as a {replica}, keeping its role as {function} immediately readable.",
            f"The silhouette follows the original footprint closely, with proportions true to the physical {label} so it can be approached and used without hesitation.",
            f"Primary surfaces take on the character of {kw(0)}, balanced by accents inspired by {kw(1)} along the edges and joints.",
            f"Broad faces are finished in tones that echo {kw(2)}, while smaller panels and supports pick up the feel of {kw(3)}.",
            "Seams, fasteners, and trim stay consistent with the overall theme, giving the piece a crafted, cohesive appearance rather than a costume.",
            "Lighting response is soft and even, with gentle wear concentrated where hands and daily use would naturally touch the surface.",
            f"Seen from across the room it reads clearly as {function} at a glance while settling naturally into the transformed environment around it.",
        ]
        return " ".join(sentences)


class MockBackend:
    """Deterministic generation backend writing into a content-addressed store."""

    def __init__(self, store: AssetStore, latency_s: float = 0.0, mesh_format: str = "obj"):
        if mesh_format not in ("obj", "glb"):
            raise InvariantError(f"mesh_format must be obj or glb, got {mesh_format!r}")
        self.store = store
        self.latency_s = latency_s
        self.mesh_format = mesh_format
        self.stats = InflightStats()
        self.llm = MockLanguageModel()

    def generate(self, request: GenerationRequest) -> AssetRecord:
        self.stats.enter(request.kind)
        try:
            if self.latency_s > 0:
                time.sleep(self.latency_s)
            handler = {
                "stylized-image": self._stylized_image,
                "image-to-3d": self._image_to_3d,
                "texture": self._texture,
                "skybox": self._skybox,
                "llm": self._llm,
            }[request.kind]
            return handler(request)
        finally:
            self.stats.exit(request.kind)

    # handlers

    def _stylized_image(self, request: GenerationRequest) -> AssetRecord:
        prompt = str(request.payload.get("prompt", ""))
        d = _digest("stylized", prompt, request.seed)
        size = 320
        img = Image.new("RGBA", (size, size), (0, 0, 0, 0))
        draw = ImageDraw.Draw(img)
        color = (d[0], d[1], d[2], 255)
        inset = 40 + d[3] % 40
        box = [inset, inset, size - inset, size - inset]
        shape = d[4] % 3
        if shape == 0:
            draw.ellipse(box, fill=color)
        elif shape == 1:
            draw.rectangle(box, fill=color)
        else:
            cx, half = size / 2, size / 2 - inset
            draw.polygon(
                [(cx, inset), (size - inset, size - inset), (inset, size - inset)],
                fill=color,
            )
        draw.rectangle(box, outline=(d[5], d[6], d[7], 255), width=4)
        return self.store.put(
            _png_bytes(img), ".png", "image", provenance=request.summary()
        )

    def _image_to_3d(self, request: GenerationRequest) -> AssetRecord:
        image_id = request.payload.get("image_asset_id")
        if not image_id or not self.store.has(str(image_id)):
            raise MissingInput(f"image asset {image_id!r} not found")
        source = self.store.record(str(image_id))
        extents = mesh_extents_from_hash(source.content_hash)
        if self.mesh_format == "obj":
            data, ext = box_obj(extents), ".obj"
        else:
            data, ext = box_glb(extents), ".glb"
        return self.store.put(
            data, ext, "mesh", provenance=request.summary(), extents=extents
        )

    def _texture(self, request: GenerationRequest) -> AssetRecord:
        prompt = str(request.payload.get("prompt", ""))
        d = _digest("texture", prompt, request.seed)
        size = 256
        img = Image.new("RGB", (size, size))
        px = img.load()
        c0 = (d[0], d[1], d[2])
        c1 = (d[3], d[4], d[5])
        period = 32
        for y in range(size):
            for x in range(size):
                px[x, y] = c0 if ((x // period) + (y // period)) % 2 == 0 else c1
        # force wrap edges equal so the pattern tiles without seams
        for y in range(size):
            px[size - 1, y] = px[0, y]
        for x in range(size):
            px[x, size - 1] = px[x, 0]
        albedo = self.store.put(_png_bytes(img), ".png", "image")

        normal = Image.new("RGB", (size, size), (128, 128, 255))
        normal_rec = self.store.put(_png_bytes(normal), ".png", "image")
        metallic = Image.new("L", (size, size), d[6] % 64)
        metallic_rec = self.store.put(_png_bytes(metallic), ".png", "image")

        manifest = {
            "albedo": albedo.asset_id,
            "normal": normal_rec.asset_id,
            "metallic": metallic_rec.asset_id,
            "tile_size_m": 1.0,
        }
        return self.store.put(
            json.dumps(manifest, sort_keys=True, indent=2).encode("utf-8"),
            ".json",
            "texture-set",
            provenance=request.summary(),
        )

    def _skybox(self, request: GenerationRequest) -> AssetRecord:
        prompt = str(request.payload.get("prompt", ""))
        duration = int(request.payload.get("duration_s", 10))
        frame_rate = int(request.payload.get("frame_rate", 24))
        d = _digest("skybox", prompt, request.seed)
        w, h = 512, 256  # equirectangular 2:1
        img = Image.new("RGB", (w, h))
        px = img.load()
        top = (d[0], d[1], d[2])
        bottom = (d[3], d[4], d[5])
        for y in range(h):
            t = y / (h - 1)
            row = tuple(int(top[i] * (1 - t) + bottom[i] * t) for i in range(3))
            for x in range(w):
                px[x, y] = row
        panorama = self.store.put(
            _png_bytes(img), ".png", "panorama", provenance=request.summary()
        )

        frame_count = max(1, duration * frame_rate)
        playlist_doc = {
            "panorama_asset_id": panorama.asset_id,
            "frame_count": frame_count,
            "frame_rate": frame_rate,
            "playlist": loop_playlist(frame_count),
        }
        return self.store.put(
            json.dumps(playlist_doc, sort_keys=True).encode("utf-8"),
            ".json",
            "motion-playlist",
            provenance=request.summary(),
        )

    def _llm(self, request: GenerationRequest) -> AssetRecord:
        text = self.llm.complete(
            str(request.payload.get("system", "")), str(request.payload.get("user", ""))
        )
        return self.store.put(
            text.encode("utf-8"), ".txt", "text", provenance=request.summary()
        )
