"""The end-to-end transformation pipeline and per-object regeneration.

Stage order: style extraction, mapping inference, then per object best-view
selection, stylized-image generation, and image-to-3D conversion, with
boundary textures and the skybox generated in parallel; composition runs
last, gated on red-flag confirmation. Per-entity failures are recorded and
never abort sibling objects; only mapping-table inference is fatal to a run.
"""

from __future__ import annotations

import datetime as _dt
import logging
from dataclasses import dataclass, field

from roomforge.bestview import annotate_frame, load_frame_image, select_best_view
from roomforge.errors import NoVisibleFrame, RoomforgeError
from roomforge.generation import GenerationRequest, stable_hash
from roomforge.scene import EntityKind, ObjectStatus, SceneEntity
from roomforge.styling import (
    StyleSpec,
    build_object_image_prompt,
    build_skybox_request,
    build_texture_prompt,
    extract_style,
    infer_mapping_table,
)

log = logging.getLogger(__name__)

STAGES = ("pending", "bestview", "mapping", "image", "mesh", "registered")


@dataclass
class EntityProgress:
    stage: str = "pending"
    frame_index: int | None = None
    degraded: bool = False
    error: str | None = None


@dataclass
class PipelineRun:
    run_id: str
    stages: dict[str, EntityProgress] = field(default_factory=dict)
    started_at: str = ""
    finished_at: str = ""
    degraded: bool = False
    composed: bool = False
    manifest_sha256: str | None = None

    def progress(self, entity_id: str) -> EntityProgress:
        return self.stages.setdefault(entity_id, EntityProgress())


def entity_seed(base_seed: int, entity_id: str, generation: int) -> int:
    digest = stable_hash({"seed": base_seed, "id": entity_id, "generation": generation})
    return int(digest[:12], 16)


def _now() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat()


def _best_view_input_image(session, entity: SceneEntity, run: PipelineRun) -> str | None:
    """Select the best frame, persist the pose, and return the asset id of
    the annotated reference frame when the source image exists on disk."""
    progress = run.progress(entity.id)
    progress.stage = "bestview"
    if session.track is None:
        progress.degraded = True
        progress.error = "no camera track; image generation falls back to prompt-only"
        run.degraded = True
        return None
    try:
        result = select_best_view(entity, session.scene, session.track)
    except NoVisibleFrame as exc:
        progress.degraded = True
        progress.error = str(exc)
        run.degraded = True
        return None
    progress.frame_index = result.frame_index
    session.apply(
        {
            "op": "set_best_frame_pose",
            "id": entity.id,
            "pose": [float(v) for v in result.pose.matrix4().ravel()],
        },
        actor="pipeline",
    )
    image_path = session.track.image_path(result.pose)
    if image_path is None or not image_path.exists():
        return None
    annotated = annotate_frame(load_frame_image(image_path), result.annotation, entity.label)
    out_path = image_path.with_name(image_path.stem + "_bestview.png")
    annotated.save(out_path)
    record = session.store.put(
        out_path.read_bytes(), ".png", "image", provenance={"kind": "bestview", "entity": entity.id}
    )
    return record.asset_id


def run_pipeline(
    session,
    style_text: str | None = None,
    seed: int | None = None,
    auto_confirm: bool = False,
) -> PipelineRun:
    """Execute the full transformation for the session's scene.

    collision_risk rows land in needs-attention instead of complete; with
    auto_confirm the flags are confirmed in scripted order and the composed
    manifest is written before returning.
    """
    run = PipelineRun(run_id=session.next_run_id(), started_at=_now())
    base_seed = session.base_seed if seed is None else seed

    current = session.scene.style or StyleSpec()
    intent = StyleSpec(
        raw_text=style_text if style_text is not None else current.raw_text,
        reference_image=current.reference_image,
    )
    style = extract_style(intent, session.llm)
    session.apply(
        {
            "op": "set_style",
            "text": style.raw_text,
            "reference_image": style.reference_image,
            "keywords": style.keywords,
            "degraded": style.degraded,
        },
        actor="pipeline",
    )

    # mapping inference is the one fatal stage
    table = infer_mapping_table(session.scene, style, session.llm)
    for row in table.objects:
        session.apply({"op": "set_mapping", "id": row.object_id, "row": row.to_dict()}, actor="pipeline")
        run.progress(row.object_id).stage = "mapping"
        session.stale_mappings.discard(row.object_id)

    targets = list(session.scene.generation_targets())
    generations = {e.id: session.generation_of(e.id) for e in targets}

    # per-object reference frames (fast, serial), then batched submissions
    reference_images: dict[str, str | None] = {}
    for entity in targets:
        try:
            reference_images[entity.id] = _best_view_input_image(session, entity, run)
        except RoomforgeError as exc:
            run.progress(entity.id).error = str(exc)
            reference_images[entity.id] = None

    for entity in targets:
        session.apply({"op": "set_status", "id": entity.id, "to": "generating"}, actor="pipeline")
    wall_entities = [e for e in session.scene.entities if e.kind is EntityKind.WALL]
    for wall in wall_entities:
        session.apply({"op": "set_status", "id": wall.id, "to": "generating"}, actor="pipeline")

    image_futures = {}
    for entity in targets:
        row = table.row_for(entity.id)
        prompt = build_object_image_prompt(row, entity, style)
        image_futures[entity.id] = session.generation.submit(
            GenerationRequest(
                kind="stylized-image",
                payload={"prompt": prompt, "input_image": reference_images[entity.id]},
                seed=entity_seed(base_seed, entity.id, generations[entity.id]),
            )
        )

    wall_future = session.generation.submit(
        GenerationRequest(
            kind="texture",
            payload={"prompt": build_texture_prompt("wall", table), "role": "wall"},
            seed=entity_seed(base_seed, "wall_texture", 0),
        )
    )
    floor_future = session.generation.submit(
        GenerationRequest(
            kind="texture",
            payload={"prompt": build_texture_prompt("floor", table), "role": "floor"},
            seed=entity_seed(base_seed, "floor_texture", 0),
        )
    )
    sky = build_skybox_request(table)
    sky_future = session.generation.submit(
        GenerationRequest(
            kind="skybox",
            payload={
                "prompt": sky.prompt,
                "negative_text": sky.negative_text,
                "motion_instruction": sky.motion_instruction,
                "duration_s": sky.duration_s,
                "frame_rate": sky.frame_rate,
            },
            seed=entity_seed(base_seed, "skybox", 0),
        )
    )

    # chain image -> mesh and land results entity by entity
    for entity in targets:
        progress = run.progress(entity.id)
        row = table.row_for(entity.id)
        try:
            image = session.generation.result(image_futures[entity.id])
            progress.stage = "image"
            mesh = session.generation.result(
                session.generation.submit(
                    GenerationRequest(
                        kind="image-to-3d",
                        payload={"image_asset_id": image.asset_id},
                        seed=entity_seed(base_seed, entity.id, generations[entity.id]),
                    )
                )
            )
            progress.stage = "mesh"
        except RoomforgeError as exc:
            progress.error = str(exc)
            session.last_errors[entity.id] = str(exc)
            log.warning("generation failed for %s: %s", entity.id, exc)
            continue
        if session.generation_of(entity.id) != generations[entity.id]:
            log.info("result for %s superseded; discarding", entity.id)
            continue
        session.apply({"op": "set_asset", "id": entity.id, "asset_id": mesh.asset_id}, actor="pipeline")
        target_status = (
            ObjectStatus.NEEDS_ATTENTION
            if row.collision_risk and entity.kind is EntityKind.OBJECT
            else ObjectStatus.COMPLETE
        )
        session.apply(
            {"op": "set_status", "id": entity.id, "to": target_status.value}, actor="pipeline"
        )

    wall_texture = session.generation.result(wall_future)
    floor_texture = session.generation.result(floor_future)
    skybox = session.generation.result(sky_future)
    for wall in wall_entities:
        session.apply({"op": "set_asset", "id": wall.id, "asset_id": wall_texture.asset_id}, actor="pipeline")
        session.apply({"op": "set_status", "id": wall.id, "to": "complete"}, actor="pipeline")

    from roomforge.compose import EnvironmentAssets

    environment = EnvironmentAssets(
        wall_texture_id=wall_texture.asset_id,
        floor_texture_id=floor_texture.asset_id,
        skybox_id=skybox.asset_id,
    )
    session.save_environment(environment)

    if auto_confirm:
        flagged = sorted(
            e.id for e in session.scene.entities if e.status is ObjectStatus.NEEDS_ATTENTION
        )
        for entity_id in flagged:
            session.confirm(entity_id)

    # compose when every target actually landed (degraded best-view notes do
    # not block; generation failures and unconfirmed red flags do)
    still_flagged = any(
        e.status is ObjectStatus.NEEDS_ATTENTION for e in session.scene.entities
    )
    all_landed = all(
        e.status in (ObjectStatus.COMPLETE, ObjectStatus.CONFIRMED)
        for e in session.scene.generation_targets()
    )
    if not still_flagged and all_landed:
        manifest = session.composed_manifest()
        run.composed = True
        run.manifest_sha256 = stable_hash({"manifest": manifest.decode("utf-8")})
        for entity in targets:
            run.progress(entity.id).stage = "registered"

    run.finished_at = _now()
    return run


def regenerate(session, entity_id: str, instruction: str = "") -> dict:
    """Regenerate one object's image and mesh, superseding any in-flight
    generation; only the latest result lands."""
    entity = session.scene.entity(entity_id)
    if entity.mapping is None:
        from roomforge.errors import InvariantError

        raise InvariantError(f"entity {entity_id!r} has no mapping row; run the pipeline first")
    generation_no = session.next_generation(entity_id)
    session.apply({"op": "set_status", "id": entity_id, "to": "generating"}, actor="regenerate")
    run_id = session.next_run_id()

    def job():
        style = session.scene.style or StyleSpec(
            keywords=["Modern Minimalist"], degraded=True
        )
        prompt = build_object_image_prompt(entity.mapping, entity, style)
        if instruction.strip():
            prompt += f" Additional adjustment instruction: {instruction.strip()}"
        seed = entity_seed(session.base_seed, entity_id, generation_no)
        image = session.generation.result(
            session.generation.submit(
                GenerationRequest(
                    kind="stylized-image",
                    payload={"prompt": prompt, "input_image": None},
                    seed=seed,
                )
            )
        )
        mesh = session.generation.result(
            session.generation.submit(
                GenerationRequest(
                    kind="image-to-3d", payload={"image_asset_id": image.asset_id}, seed=seed
                )
            )
        )
        if session.generation_of(entity_id) != generation_no:
            log.info("regeneration %s superseded", run_id)
            return
        session.apply({"op": "set_asset", "id": entity_id, "asset_id": mesh.asset_id}, actor="regenerate")
        target = (
            "needs-attention"
            if entity.mapping.collision_risk and entity.kind is EntityKind.OBJECT
            else "complete"
        )
        session.apply({"op": "set_status", "id": entity_id, "to": target}, actor="regenerate")
        session.stale_mappings.discard(entity_id)

    session.submit_job(job)
    return {"run_id": run_id, "entity_id": entity_id, "generation": generation_no}
