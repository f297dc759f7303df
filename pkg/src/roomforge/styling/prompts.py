"""Deterministic prompt builders: equal inputs give byte-equal outputs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from roomforge.styling import resources
from roomforge.styling.types import DEFAULT_STYLE, MappingRow, MappingTable, StyleSpec

if TYPE_CHECKING:
    from roomforge.scene.model import SceneEntity

SKYBOX_DURATION_S = 10
SKYBOX_FRAME_RATE = 24

_TILEABLE_SUFFIX = (
    " The texture must be a seamless, tileable RGB material that repeats across large"
    " {kind} surfaces without visible seams."
)


def _fmt_number(x: float) -> str:
    r = round(float(x), 6)
    if r == int(r):
        return str(float(int(r)))
    return str(r)


def _fmt_vec(values) -> str:
    return "[" + ", ".join(_fmt_number(v) for v in values) + "]"


def build_object_image_prompt(row: MappingRow, entity: "SceneEntity", style: StyleSpec) -> str:
    """Fill the stylized-image template for one object.

    Includes the size/rotation clause whenever the scaffold box is present,
    embedding extents in meters ([x,y,z], z-up) and the yaw in radians.
    """
    size_str = _fmt_vec(entity.box.size)
    size_req = resources.image_prompt_size_template().format(
        size=size_str,
        rotation=_fmt_number(entity.box.yaw),
    )
    return resources.image_prompt_template().format(
        object_function=row.object_function,
        label=row.label,
        replica=row.replica,
        style=style.joined or DEFAULT_STYLE,
        replica_function=row.replica_function,
        details=row.appearance_prompt,
        size_req=size_req,
        size=size_str,
    )


def build_texture_prompt(kind: str, table: MappingTable) -> str:
    """Wrap the table's wall or floor prompt with the tileability requirement."""
    if kind == "wall":
        base = table.wall_texture.prompt
    elif kind == "floor":
        base = table.floor_texture.prompt
    else:
        raise ValueError(f"texture kind must be 'wall' or 'floor', got {kind!r}")
    return base + _TILEABLE_SUFFIX.format(kind=kind)


@dataclass(frozen=True)
class SkyboxRequest:
    prompt: str
    negative_text: str
    motion_instruction: str
    duration_s: int = SKYBOX_DURATION_S
    frame_rate: int = SKYBOX_FRAME_RATE


def build_skybox_request(table: MappingTable) -> SkyboxRequest:
    """Combine the skybox prompt with the fixed static-camera motion
    constraints (10-second loop, stable edges)."""
    return SkyboxRequest(
        prompt=table.skybox.prompt,
        negative_text=table.skybox.negative_text,
        motion_instruction=resources.skybox_motion_system(),
    )


def build_skybox_motion_user(image_description: str) -> str:
    return resources.skybox_motion_user().format(image_description=image_description)
