"""Best-view frame annotation: hull outline in pure green plus a label."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw, UnidentifiedImageError

from roomforge.errors import ImageDecodeError
from roomforge.geometry.polygon import Polygon2D

GREEN = (0, 255, 0)
STROKE_PX = 3


def load_frame_image(path: str | Path) -> Image.Image:
    try:
        with Image.open(path) as img:
            return img.convert("RGB")
    except (FileNotFoundError, UnidentifiedImageError, OSError) as exc:
        raise ImageDecodeError(f"cannot decode frame image {path}: {exc}")


def annotate_frame(image: Image.Image, annotation: Polygon2D, label: str) -> Image.Image:
    """Return a copy of the frame with the visibility hull drawn in pure
    green (3 px stroke) and the label near the hull's top vertex. The input
    image is untouched; output dimensions always equal input dimensions."""
    out = image.copy().convert("RGB")
    draw = ImageDraw.Draw(out)
    verts = np.asarray(annotation.vertices, dtype=float)
    if len(verts) == 0:
        return out

    if len(verts) == 1:
        u, v = verts[0]
        r = STROKE_PX
        draw.ellipse([u - r, v - r, u + r, v + r], outline=GREEN, width=STROKE_PX)
    else:
        points = [tuple(p) for p in verts]
        if len(points) >= 3:
            points = points + [points[0]]
        draw.line(points, fill=GREEN, width=STROKE_PX, joint="curve")

    top = verts[np.argmin(verts[:, 1])]
    text_pos = (float(top[0]) + 4, max(0.0, float(top[1]) - 14))
    draw.text(text_pos, label, fill=GREEN)
    return out
