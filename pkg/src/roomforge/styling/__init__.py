from .types import (
    DEFAULT_STYLE,
    KEYWORDS_MAX,
    KEYWORDS_MIN,
    LanguageModelClient,
    MAPPING_COLUMNS,
    MappingRow,
    MappingTable,
    SkyboxPrompt,
    StyleSpec,
    TexturePrompt,
)
from .extract import extract_style, parse_keyword_reply
from .mapping import build_mapping_prompt, infer_mapping_table, objects_line
from .prompts import (
    SkyboxRequest,
    build_object_image_prompt,
    build_skybox_request,
    build_texture_prompt,
)
from . import resources

__all__ = [
    "DEFAULT_STYLE",
    "KEYWORDS_MAX",
    "KEYWORDS_MIN",
    "LanguageModelClient",
    "MAPPING_COLUMNS",
    "MappingRow",
    "MappingTable",
    "SkyboxPrompt",
    "SkyboxRequest",
    "StyleSpec",
    "TexturePrompt",
    "build_mapping_prompt",
    "build_object_image_prompt",
    "build_skybox_request",
    "build_texture_prompt",
    "extract_style",
    "infer_mapping_table",
    "objects_line",
    "parse_keyword_reply",
    "resources",
]
