"""Style keyword extraction with a validated retry and a safe fallback."""

from __future__ import annotations

import logging

from roomforge.errors import InvariantError
from roomforge.styling import resources
from roomforge.styling.types import (
    DEFAULT_STYLE,
    KEYWORDS_MAX,
    KEYWORDS_MIN,
    LanguageModelClient,
    StyleSpec,
)

log = logging.getLogger(__name__)


def parse_keyword_reply(reply: str) -> list[str]:
    parts = [p.strip() for p in reply.replace("\n", ",").split(",")]
    return [p for p in parts if p]


def extract_style(intent: StyleSpec, llm: LanguageModelClient) -> StyleSpec:
    """Derive 4-8 structured style keywords from the user's intent.

    One retry on an unusable reply; after that the single default style is
    applied and the result is flagged degraded instead of raising.
    """
    if not intent.raw_text.strip() and not intent.reference_image:
        raise InvariantError("style intent needs text or a reference image")

    system = resources.style_extraction_system()
    images = [intent.reference_image] if intent.reference_image else None

    for attempt in range(2):
        reply = llm.complete(system, intent.raw_text, images=images)
        keywords = parse_keyword_reply(reply)
        if KEYWORDS_MIN <= len(keywords) <= KEYWORDS_MAX:
            return StyleSpec(
                raw_text=intent.raw_text,
                reference_image=intent.reference_image,
                keywords=keywords,
            )
        log.warning(
            "style extraction attempt %d returned %d keywords; expected %d-%d",
            attempt + 1,
            len(keywords),
            KEYWORDS_MIN,
            KEYWORDS_MAX,
        )

    log.warning("style extraction degraded to the default style %r", DEFAULT_STYLE)
    return StyleSpec(
        raw_text=intent.raw_text,
        reference_image=intent.reference_image,
        keywords=[DEFAULT_STYLE],
        degraded=True,
    )
