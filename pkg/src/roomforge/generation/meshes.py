"""Deterministic box-mesh writers (OBJ and binary glTF)."""

from __future__ import annotations

import json
import struct

import numpy as np

_BOX_SIGNS = np.array(
    [
        [-1, -1, -1],
        [+1, -1, -1],
        [+1, +1, -1],
        [-1, +1, -1],
        [-1, -1, +1],
        [+1, -1, +1],
        [+1, +1, +1],
        [-1, +1, +1],
    ],
    dtype=float,
)

# Outward-wound triangles (0-based indices into _BOX_SIGNS order).
_BOX_TRIANGLES = [
    (0, 3, 2), (0, 2, 1),  # bottom
    (4, 5, 6), (4, 6, 7),  # top
    (0, 1, 5), (0, 5, 4),  # -y
    (2, 3, 7), (2, 7, 6),  # +y
    (3, 0, 4), (3, 4, 7),  # -x
    (1, 2, 6), (1, 6, 5),  # +x
]


def box_vertices(extents) -> np.ndarray:
    e = np.asarray(extents, dtype=float).reshape(3)
    return _BOX_SIGNS * (e / 2.0)


def box_obj(extents) -> bytes:
    """Watertight 12-triangle box as OBJ text, centered at the origin."""
    lines = ["# roomforge box mesh"]
    for v in box_vertices(extents):
        lines.append("v %.6f %.6f %.6f" % (v[0], v[1], v[2]))
    for a, b, c in _BOX_TRIANGLES:
        lines.append(f"f {a + 1} {b + 1} {c + 1}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _pad(data: bytes, align: int, fill: bytes) -> bytes:
    rem = len(data) % align
    return data if rem == 0 else data + fill * (align - rem)


def box_glb(extents) -> bytes:
    """The same box as a minimal glTF 2.0 binary (positions + indices)."""
    verts = box_vertices(extents).astype("<f4")
    indices = np.asarray(_BOX_TRIANGLES, dtype="<u2").ravel()
    pos_bytes = verts.tobytes()
    idx_bytes = _pad(indices.tobytes(), 4, b"\x00")
    bin_chunk = pos_bytes + idx_bytes

    doc = {
        "asset": {"version": "2.0", "generator": "roomforge"},
        "scene": 0,
        "scenes": [{"nodes": [0]}],
        "nodes": [{"mesh": 0}],
        "meshes": [{"primitives": [{"attributes": {"POSITION": 0}, "indices": 1, "mode": 4}]}],
        "buffers": [{"byteLength": len(bin_chunk)}],
        "bufferViews": [
            {"buffer": 0, "byteOffset": 0, "byteLength": len(pos_bytes), "target": 34962},
            {"buffer": 0, "byteOffset": len(pos_bytes), "byteLength": len(idx_bytes), "target": 34963},
        ],
        "accessors": [
            {
                "bufferView": 0,
                "componentType": 5126,
                "count": 8,
                "type": "VEC3",
                "min": verts.min(axis=0).tolist(),
                "max": verts.max(axis=0).tolist(),
            },
            {"bufferView": 1, "componentType": 5123, "count": 36, "type": "SCALAR"},
        ],
    }
    json_chunk = _pad(json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8"), 4, b" ")

    total = 12 + 8 + len(json_chunk) + 8 + len(bin_chunk)
    out = struct.pack("<III", 0x46546C67, 2, total)
    out += struct.pack("<II", len(json_chunk), 0x4E4F534A) + json_chunk
    out += struct.pack("<II", len(bin_chunk), 0x004E4942) + bin_chunk
    return out
