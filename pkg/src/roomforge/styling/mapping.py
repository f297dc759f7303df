"""Mapping-table inference: prompt assembly, strict validation, one re-ask."""

from __future__ import annotations

import json
import logging
import re
from typing import TYPE_CHECKING

from roomforge.errors import InvariantError, ValidationError
from roomforge.styling import resources
from roomforge.styling.types import (
    LanguageModelClient,
    MappingRow,
    MappingTable,
    SkyboxPrompt,
    StyleSpec,
    TexturePrompt,
)

if TYPE_CHECKING:
    from roomforge.scene.model import SceneEntity, SceneModel

log = logging.getLogger(__name__)

_EXAMPLE_SEPARATOR = "\n\n"
_FENCE_RE = re.compile(r"^```[a-zA-Z0-9]*\n|\n?```$")

APPEARANCE_WORDS_MIN = 100
APPEARANCE_WORDS_MAX = 200

# Doors and windows never enter the red-flag path, so their rows are
# normalized to collision_risk=false regardless of what the backend said.
_NON_RISK_KINDS = ("door", "window")


def objects_line(entities: list["SceneEntity"]) -> str:
    return ", ".join(f"{e.id}:{e.label}" for e in entities)


def build_mapping_prompt(style: StyleSpec, entities: list["SceneEntity"], scene_json: str) -> str:
    example_tmpl = resources.mapping_example_template()
    blocks = [resources.mapping_prefix()]
    for ex in resources.few_shot_examples():
        blocks.append(
            example_tmpl.format(style=ex["style"], objects=ex["objects"], output=ex["output"])
        )
    blocks.append(
        resources.mapping_suffix().format(
            style=style.joined,
            objects=objects_line(entities),
            scene_json=scene_json,
        )
    )
    return _EXAMPLE_SEPARATOR.join(blocks)


def _parse_reply(reply: str) -> dict:
    text = _FENCE_RE.sub("", reply.strip())
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"mapping reply is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ValidationError("mapping reply must be a JSON object")
    return doc


def _rows_from_doc(doc: dict, known: dict[str, "SceneEntity"]) -> dict[str, MappingRow]:
    raw_rows = doc.get("objects")
    if not isinstance(raw_rows, list):
        raise ValidationError("mapping reply is missing the 'objects' array")
    rows: dict[str, MappingRow] = {}
    for raw in raw_rows:
        if not isinstance(raw, list):
            raise ValidationError(f"mapping row must be an array, got: {raw!r}")
        try:
            row = MappingRow.from_list(raw)
        except InvariantError as exc:
            raise ValidationError(f"bad mapping row {raw!r}: {exc}")
        entity = known.get(row.object_id)
        if entity is None:
            log.warning("dropping mapping row for unknown object id %r", row.object_id)
            continue
        if row.object_id in rows:
            log.warning("duplicate mapping row for %r; keeping the first", row.object_id)
            continue
        if entity.kind.value in _NON_RISK_KINDS and row.collision_risk:
            row.collision_risk = False
        rows[row.object_id] = row
    return rows


def _prompt_section(doc: dict, name: str) -> dict:
    section = doc.get(name)
    if not isinstance(section, dict) or not str(section.get("prompt", "")).strip():
        raise ValidationError(f"mapping reply is missing a usable {name!r} section")
    return section


def _warn_appearance_length(rows: dict[str, MappingRow]) -> None:
    for row in rows.values():
        n = len(row.appearance_prompt.split())
        if not (APPEARANCE_WORDS_MIN <= n <= APPEARANCE_WORDS_MAX):
            log.warning(
                "appearance_prompt for %r is %d words (target %d-%d)",
                row.object_id,
                n,
                APPEARANCE_WORDS_MIN,
                APPEARANCE_WORDS_MAX,
            )


def infer_mapping_table(
    scene: "SceneModel", style: StyleSpec, llm: LanguageModelClient
) -> MappingTable:
    """Build and validate the transformation specification table.

    Rows for unknown ids are rejected; missing rows trigger exactly one
    targeted re-ask before a ValidationError is raised.
    """
    if not style.keywords:
        raise InvariantError("style keywords must be extracted before mapping inference")
    targets = scene.generation_targets()
    if not any(e.kind.value == "object" for e in targets):
        raise InvariantError("scene has no object entities to map")

    from roomforge.scene.io import serialize_scene

    scene_json = serialize_scene(scene).decode("utf-8")
    known = {e.id: e for e in targets}

    prompt = build_mapping_prompt(style, targets, scene_json)
    doc = _parse_reply(llm.complete("", prompt))
    rows = _rows_from_doc(doc, known)

    missing = [e for e in targets if e.id not in rows]
    if missing:
        log.warning("mapping reply missing rows for %s; re-asking", [e.id for e in missing])
        retry_prompt = build_mapping_prompt(style, missing, scene_json)
        retry_doc = _parse_reply(llm.complete("", retry_prompt))
        rows.update({k: v for k, v in _rows_from_doc(retry_doc, known).items() if k not in rows})
        still_missing = [e.id for e in targets if e.id not in rows]
        if still_missing:
            raise ValidationError(f"mapping table is missing rows for {still_missing}")

    skybox = _prompt_section(doc, "skybox")
    wall = _prompt_section(doc, "wall_texture")
    floor = _prompt_section(doc, "floor_texture")
    _warn_appearance_length(rows)

    return MappingTable(
        objects=[rows[e.id] for e in targets],
        skybox=SkyboxPrompt(
            prompt=str(skybox["prompt"]),
            negative_text=str(skybox.get("negative_text", "")),
        ),
        wall_texture=TexturePrompt(prompt=str(wall["prompt"])),
        floor_texture=TexturePrompt(prompt=str(floor["prompt"])),
    )
