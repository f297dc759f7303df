"""Session report: registration figures rendered alongside a delimited
placement summary.

Outputs, per session:
    report/placements.csv   one row per entity with transform and IoU
    report/floorplan.png    top-down plan: walls, offset panels, scaffolds,
                            and registered footprints colored by status
    report/iou.png          achieved orientation IoU per placed object
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from roomforge.geometry import footprint_polygon
from roomforge.scene import EntityKind, SceneModel

STATUS_COLORS = {
    "pending": "#888888",
    "generating": "#1f6fd6",
    "complete": "#2e9e44",
    "needs-attention": "#d62f2f",
    "confirmed": "#2e9e44",
}


def _placed_by_id(manifest: dict | None) -> dict:
    if not manifest:
        return {}
    return {p["entity_id"]: p for p in manifest.get("placed", [])}


def write_placements_csv(scene: SceneModel, manifest: dict | None, path: Path) -> None:
    placed = _placed_by_id(manifest)
    columns = [
        "entity_id", "kind", "label", "status", "asset_id", "achieved_iou",
        "tx", "ty", "tz", "yaw", "flip", "sx", "sy", "sz",
    ]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for entity in scene.entities:
            row = placed.get(entity.id)
            if row:
                t = row["translation"]
                s = row["per_axis_scale"]
                writer.writerow(
                    [
                        entity.id, entity.kind.value, entity.label, entity.status.value,
                        row["asset_id"], f"{row['achieved_iou']:.6f}",
                        f"{t[0]:.6f}", f"{t[1]:.6f}", f"{t[2]:.6f}", f"{row['yaw']:.6f}",
                        row["flip"], f"{s[0]:.6f}", f"{s[1]:.6f}", f"{s[2]:.6f}",
                    ]
                )
            else:
                writer.writerow(
                    [entity.id, entity.kind.value, entity.label, entity.status.value,
                     entity.asset_id or "", "", "", "", "", "", "", "", "", ""]
                )


def render_floorplan(scene: SceneModel, manifest: dict | None, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(8, 6))
    for wall in scene.walls:
        ax.plot([wall.a[0], wall.b[0]], [wall.a[1], wall.b[1]], color="black", lw=2.5)
    if manifest:
        for panel in manifest.get("walls", []):
            quad = np.asarray(panel["quad"])
            ax.plot(quad[:2, 0], quad[:2, 1], color="tab:brown", lw=1.2, ls="--")
    for entity in scene.entities:
        if entity.kind is EntityKind.WALL:
            continue
        poly = footprint_polygon(entity.box).vertices
        loop = np.vstack([poly, poly[:1]])
        color = STATUS_COLORS.get(entity.status.value, "#888888")
        ax.plot(loop[:, 0], loop[:, 1], color=color, lw=1.3)
        ax.annotate(
            entity.label,
            entity.box.center[:2],
            ha="center", va="center", fontsize=6, color=color,
        )
    ax.set_aspect("equal")
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    ax.set_title("room scaffolds and registered placements")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_iou_chart(manifest: dict | None, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    placed = (manifest or {}).get("placed", [])
    if placed:
        names = [p["entity_id"] for p in placed]
        ious = [p["achieved_iou"] for p in placed]
        ax.barh(names, ious, color="#1f6fd6")
        ax.axvline(0.95, color="#d62f2f", ls=":", lw=1, label="yaw-recovery target")
        ax.set_xlim(0, 1.0)
        ax.legend(loc="lower right", fontsize=7)
    else:
        ax.text(0.5, 0.5, "no composed placements yet", ha="center", va="center")
        ax.set_axis_off()
    ax.set_xlabel("orientation IoU")
    ax.tick_params(axis="y", labelsize=6)
    ax.set_title("achieved registration IoU per object")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_report(session_dir: str | Path, out_dir: str | Path | None = None) -> list[Path]:
    """Render all report artifacts for a session directory; returns the
    written paths."""
    from roomforge.scene import parse_scene

    session_dir = Path(session_dir)
    out = Path(out_dir) if out_dir else session_dir / "report"
    out.mkdir(parents=True, exist_ok=True)

    scene = parse_scene((session_dir / "scene.json").read_bytes())
    manifest = None
    manifest_path = session_dir / "manifest.json"
    if manifest_path.exists():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    written = []
    csv_path = out / "placements.csv"
    write_placements_csv(scene, manifest, csv_path)
    written.append(csv_path)
    plan_path = out / "floorplan.png"
    render_floorplan(scene, manifest, plan_path)
    written.append(plan_path)
    iou_path = out / "iou.png"
    render_iou_chart(manifest, iou_path)
    written.append(iou_path)
    return written
