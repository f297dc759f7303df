"""roomforge command line: run the pipeline, pick best views, compose,
serve the authoring API, and render session reports."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from roomforge.errors import RoomforgeError


@click.group()
def main():
    """Spatially-grounded scene transformation toolkit."""


@main.command()
@click.option("--scene", "scene_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--track", "track_path", type=click.Path(exists=True, path_type=Path))
@click.option("--style", "style_text", required=True, help="style intent text")
@click.option("--backend", default="mock", type=click.Choice(["mock", "live"]))
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--confirm-all", is_flag=True, help="confirm red-flagged placements non-interactively")
@click.option("--mesh-format", default="obj", type=click.Choice(["obj", "glb"]), show_default=True)
def run(scene_path, track_path, style_text, backend, out_dir, seed, confirm_all, mesh_format):
    """Run the full transformation pipeline into a session directory."""
    from roomforge.bestview import load_track
    from roomforge.service import Session, run_pipeline

    track = load_track(track_path) if track_path else None
    session = Session.create(
        out_dir,
        scene=scene_path.read_bytes(),
        track=track,
        backend_name=backend,
        base_seed=seed,
        mesh_format=mesh_format,
    )
    try:
        run_record = run_pipeline(session, style_text=style_text, seed=seed, auto_confirm=confirm_all)
    except RoomforgeError as exc:
        raise click.ClickException(str(exc))
    finally:
        session.close()

    errors = {eid: p.error for eid, p in run_record.stages.items() if p.error}
    click.echo(f"run {run_record.run_id}: {len(run_record.stages)} entities processed")
    if run_record.degraded:
        click.echo("warning: run degraded (missing track or invisible objects)")
    for eid, message in errors.items():
        click.echo(f"  {eid}: {message}", err=True)
    if run_record.composed:
        click.echo(f"composed manifest: {out_dir / 'manifest.json'}")
    else:
        flagged = [
            e["id"]
            for e in session.status_report()["entities"]
            if e["status"] == "needs-attention"
        ]
        click.echo(
            "composition deferred; confirm red-flagged placements first: "
            + ", ".join(flagged)
        )


@main.command()
@click.option("--scene", "scene_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--track", "track_path", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--object", "object_id", help="restrict to one entity id")
@click.option("--depth-margin", default=0.05, show_default=True, type=float)
def bestview(scene_path, track_path, object_id, depth_margin):
    """Select best-view frames and annotate them when frame images exist."""
    from roomforge.bestview import annotate_frame, load_frame_image, load_track, select_best_view
    from roomforge.errors import NoVisibleFrame
    from roomforge.scene import parse_scene

    scene = parse_scene(scene_path.read_bytes())
    track = load_track(track_path)
    targets = scene.generation_targets()
    if object_id:
        targets = [scene.entity(object_id)]

    click.echo(f"{'entity':24s} {'frame':>5s} {'corners':>7s} {'center_px':>10s} {'area_px2':>10s}")
    for entity in targets:
        try:
            result = select_best_view(entity, scene, track, depth_margin)
        except NoVisibleFrame:
            click.echo(f"{entity.id:24s} {'-':>5s} {'0':>7s} {'-':>10s} {'-':>10s}")
            continue
        click.echo(
            f"{entity.id:24s} {result.frame_index:5d} {result.score.vis_cnt:7d} "
            f"{result.score.center_dist:10.1f} {result.score.vis_area:10.1f}"
        )
        image_path = track.image_path(result.pose)
        if image_path is not None and image_path.exists():
            annotated = annotate_frame(
                load_frame_image(image_path), result.annotation, entity.label
            )
            out_path = image_path.with_name(image_path.stem + "_bestview.png")
            annotated.save(out_path)
            click.echo(f"{'':24s} wrote {out_path}")


@main.command()
@click.option("--session", "session_dir", required=True, type=click.Path(exists=True, path_type=Path))
def compose(session_dir):
    """Compose the manifest for an existing session."""
    from roomforge.errors import BlockedByAttention
    from roomforge.service import Session

    session = Session(session_dir)
    try:
        manifest = session.composed_manifest()
    except BlockedByAttention as exc:
        raise click.ClickException(
            "blocked: confirm these placements first: " + ", ".join(exc.entity_ids)
        )
    except RoomforgeError as exc:
        raise click.ClickException(str(exc))
    finally:
        session.close()
    click.echo(f"manifest written: {session_dir / 'manifest.json'}")
    doc = json.loads(manifest)
    click.echo(
        f"placed={len(doc['placed'])} walls={len(doc['walls'])} "
        f"floor_area={_floor_area(doc):.3f} m^2"
    )


def _floor_area(doc) -> float:
    import numpy as np

    poly = np.asarray(doc["floor"]["polygon"])
    x, y = poly[:, 0], poly[:, 1]
    return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))) / 2.0)


@main.command()
@click.option("--session", "session_dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(session_dir, port, host):
    """Serve the authoring REST API (and the web UI when built)."""
    import uvicorn

    from roomforge.service import Session, create_app

    session = Session(session_dir)
    ui_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    app = create_app(session, ui_dir=ui_dir if ui_dir.is_dir() else None)
    click.echo(f"serving session {session_dir} on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--session", "session_dir", required=True, type=click.Path(exists=True, path_type=Path))
@click.option("--out", "out_dir", type=click.Path(path_type=Path))
def report(session_dir, out_dir):
    """Render placement figures and the delimited placement summary."""
    from roomforge.report import render_report

    try:
        written = render_report(session_dir, out_dir)
    except RoomforgeError as exc:
        raise click.ClickException(str(exc))
    for path in written:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    sys.exit(main())
