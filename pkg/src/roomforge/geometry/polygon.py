"""2D polygon primitives: hulls, shoelace area, containment, convex clipping.

All polygons are counter-clockwise. Degenerate polygons (fewer than three
vertices) are legal values with zero area; visibility logic upstream counts
corners rather than area, so degenerate hulls still matter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Polygon2D:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "vertices", v)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def area(self) -> float:
        return polygon_area(self)

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: np.ndarray) -> Polygon2D:
    """Counter-clockwise convex hull (monotone chain); collinear interior
    points are dropped. One or two distinct input points give a degenerate
    polygon."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("convex_hull requires at least one point")
    pts = np.unique(pts, axis=0)
    if len(pts) <= 2:
        return Polygon2D(pts)

    def build(chain_points):
        out: list[np.ndarray] = []
        for p in chain_points:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all collinear
        return Polygon2D(np.array([pts[0], pts[-1]]))
    return Polygon2D(np.array(hull))


def polygon_area(polygon: Polygon2D) -> float:
    """Shoelace area; zero for degenerate polygons."""
    v = polygon.vertices
    if len(v) < 3:
        return 0.0
    x, y = v[:, 0], v[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0)


def _on_segment(q, a, b, tol: float) -> bool:
    ab = b - a
    aq = q - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return bool(np.hypot(*aq) <= tol)
    t = float(aq @ ab) / denom
    t = min(1.0, max(0.0, t))
    closest = a + t * ab
    return bool(np.hypot(*(q - closest)) <= tol)


def point_in_polygon(q: np.ndarray, polygon: Polygon2D, tol: float = 1e-9) -> bool:
    """Inside-or-on-boundary test; boundary counts as inside so occlusion
    filtering stays conservative."""
    q = np.asarray(q, dtype=float).reshape(2)
    v = polygon.vertices
    n = len(v)
    if n == 0:
        return False
    for i in range(n):
        if _on_segment(q, v[i], v[(i + 1) % n], tol):
            return True
    if n < 3:
        return False
    inside = False
    for i in range(n):
        a, b = v[i], v[(i + 1) % n]
        if (a[1] > q[1]) != (b[1] > q[1]):
            x_cross = a[0] + (q[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if q[0] < x_cross:
                inside = not inside
    return inside


def clip_convex(subject: Polygon2D, clip: Polygon2D) -> Polygon2D:
    """Sutherland-Hodgman intersection of two convex CCW polygons.

    Vertices exactly on a clip edge are kept, so clipping a polygon against
    itself is an identity.
    """
    output = [np.asarray(p, dtype=float) for p in subject.vertices]
    clip_v = clip.vertices
    if len(output) < 3 or len(clip_v) < 3:
        return Polygon2D(np.zeros((0, 2)))
    for i in range(len(clip_v)):
        a, b = clip_v[i], clip_v[(i + 1) % len(clip_v)]
        if not output:
            break
        source = output
        output = []
        prev = source[-1]
        prev_in = _cross(a, b, prev) >= 0
        for cur in source:
            cur_in = _cross(a, b, cur) >= 0
            if cur_in != prev_in:
                output.append(_edge_intersection(a, b, prev, cur))
            if cur_in:
                output.append(cur)
            prev, prev_in = cur, cur_in
    return Polygon2D(np.array(output) if output else np.zeros((0, 2)))


def _edge_intersection(a, b, p, q) -> np.ndarray:
    d_clip = b - a
    d_seg = q - p
    denom = d_clip[0] * d_seg[1] - d_clip[1] * d_seg[0]
    if denom == 0.0:  # parallel; endpoints handled by inclusion test
        return q.copy()
    t = ((a[0] - p[0]) * d_clip[1] - (a[1] - p[1]) * d_clip[0]) / -denom
    return p + t * d_seg
