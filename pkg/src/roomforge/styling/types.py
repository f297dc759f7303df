"""Value types for style intent and the per-object transformation table."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

from roomforge.errors import InvariantError

KEYWORDS_MIN = 4
KEYWORDS_MAX = 8
DEFAULT_STYLE = "Modern Minimalist"

# Fixed column order of a mapping row; enforced verbatim on parse.
MAPPING_COLUMNS = (
    "object_id",
    "label",
    "object_function",
    "replica",
    "replica_function",
    "appearance_prompt",
    "collision_risk",
)


@runtime_checkable
class LanguageModelClient(Protocol):
    """Minimal chat interface the styling operations need from a backend."""

    def complete(self, system: str, user: str, images: list[str] | None = None) -> str:
        """Return the raw text reply for one system+user exchange."""
        ...


@dataclass
class StyleSpec:
    """User style intent plus the structured keywords extracted from it."""

    raw_text: str = ""
    reference_image: str | None = None
    keywords: list[str] = field(default_factory=list)
    degraded: bool = False

    def __post_init__(self):
        if self.keywords:
            self.validate_keywords()

    def validate_keywords(self) -> None:
        if any(not k.strip() for k in self.keywords):
            raise InvariantError("style keywords must be non-empty strings")
        n = len(self.keywords)
        if self.degraded:
            return
        if not (KEYWORDS_MIN <= n <= KEYWORDS_MAX):
            raise InvariantError(
                f"expected {KEYWORDS_MIN}-{KEYWORDS_MAX} style keywords, got {n}"
            )

    @property
    def joined(self) -> str:
        return ", ".join(self.keywords) if self.keywords else self.raw_text


@dataclass
class MappingRow:
    """One object's row of the transformation specification table."""

    object_id: str
    label: str
    object_function: str
    replica: str
    replica_function: str
    appearance_prompt: str
    collision_risk: bool

    def __post_init__(self):
        for name in MAPPING_COLUMNS[:-1]:
            if not str(getattr(self, name)).strip():
                raise InvariantError(f"mapping row field {name!r} must be non-empty")
        if not isinstance(self.collision_risk, bool):
            raise InvariantError("collision_risk must be a boolean")

    def as_list(self) -> list:
        return [getattr(self, name) for name in MAPPING_COLUMNS]

    @classmethod
    def from_list(cls, row: list) -> "MappingRow":
        if len(row) != len(MAPPING_COLUMNS):
            raise InvariantError(
                f"mapping row must have exactly {len(MAPPING_COLUMNS)} columns, got {len(row)}"
            )
        return cls(**dict(zip(MAPPING_COLUMNS, row)))

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in MAPPING_COLUMNS}

    @classmethod
    def from_dict(cls, data: dict) -> "MappingRow":
        return cls(**{name: data[name] for name in MAPPING_COLUMNS})


@dataclass
class TexturePrompt:
    prompt: str

    def __post_init__(self):
        if not self.prompt.strip():
            raise InvariantError("texture prompt must be non-empty")


@dataclass
class SkyboxPrompt:
    prompt: str
    negative_text: str = ""

    def __post_init__(self):
        if not self.prompt.strip():
            raise InvariantError("skybox prompt must be non-empty")


@dataclass
class MappingTable:
    """The full transformation specification: one row per in-scene object,
    plus boundary and environment prompts."""

    objects: list[MappingRow]
    skybox: SkyboxPrompt
    wall_texture: TexturePrompt
    floor_texture: TexturePrompt

    def row_for(self, object_id: str) -> MappingRow | None:
        for row in self.objects:
            if row.object_id == object_id:
                return row
        return None

    def to_dict(self) -> dict:
        return {
            "objects": [row.as_list() for row in self.objects],
            "skybox": {"prompt": self.skybox.prompt, "negative_text": self.skybox.negative_text},
            "wall_texture": {"prompt": self.wall_texture.prompt},
            "floor_texture": {"prompt": self.floor_texture.prompt},
        }
