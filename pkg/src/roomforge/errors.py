"""Shared exception types for the roomforge engine and service."""

from __future__ import annotations


class RoomforgeError(Exception):
    """Base class for all engine errors."""

    code = "error"


class SchemaError(RoomforgeError):
    """A document is missing a field or has a field of the wrong type."""

    code = "schema_error"

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{message} (at {path})" if path else message)


class InvariantError(RoomforgeError):
    """A structurally valid document violates a semantic invariant."""

    code = "invariant_error"

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{message} (at {path})" if path else message)


class IllegalTransition(RoomforgeError):
    code = "illegal_transition"


class UnknownEntity(RoomforgeError):
    code = "unknown_entity"


class NoVisibleFrame(RoomforgeError):
    """No camera frame sees any corner of the object."""

    code = "no_visible_frame"


class ImageDecodeError(RoomforgeError):
    code = "image_decode_error"


class ValidationError(RoomforgeError):
    """A generation backend returned a structurally unusable reply."""

    code = "validation_error"


class BackendError(RoomforgeError):
    """Transport-level failure talking to a generation backend."""

    code = "backend_error"


class ContentRejected(RoomforgeError):
    """Backend refused the prompt; not retried."""

    code = "content_rejected"


class GenerationTimeout(RoomforgeError):
    code = "generation_timeout"


class MissingInput(RoomforgeError):
    """A request references an input asset that does not exist."""

    code = "missing_input"


class MissingAsset(RoomforgeError):
    code = "missing_asset"


class MissingHostWall(RoomforgeError):
    code = "missing_host_wall"


class DegenerateRoom(RoomforgeError):
    """The wall layout does not enclose a usable interior."""

    code = "degenerate_room"


class BlockedByAttention(RoomforgeError):
    """Composition refused while red-flagged placements are unconfirmed."""

    code = "blocked_by_attention"

    def __init__(self, entity_ids: list[str]):
        self.entity_ids = list(entity_ids)
        super().__init__(
            "placements awaiting confirmation: " + ", ".join(self.entity_ids)
        )
