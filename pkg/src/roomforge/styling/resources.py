"""Loaders for versioned prompt-template resources.

Templates are stored byte-exact so drift is detectable by tests; never strip
or rewrap them when loading.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=None)
def template(name: str) -> str:
    path = resources.files("roomforge.styling") / "templates" / name
    return path.read_bytes().decode("utf-8")


@lru_cache(maxsize=None)
def few_shot_examples() -> tuple[dict, ...]:
    doc = json.loads(template("mapping_few_shot.json"))
    return tuple(doc["examples"])


def style_extraction_system() -> str:
    return template("style_extraction_system.txt")


def mapping_prefix() -> str:
    return template("mapping_prefix.txt")


def mapping_example_template() -> str:
    return template("mapping_example.txt")


def mapping_suffix() -> str:
    return template("mapping_suffix.txt")


def image_prompt_template() -> str:
    return template("image_prompt.txt")


def image_prompt_size_template() -> str:
    return template("image_prompt_size.txt")


def skybox_motion_system() -> str:
    return template("skybox_motion_system.txt")


def skybox_motion_user() -> str:
    return template("skybox_motion_user.txt")
