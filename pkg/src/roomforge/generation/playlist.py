"""Seamless frame looping by forward-reverse concatenation."""

from __future__ import annotations

from roomforge.errors import InvariantError


def loop_playlist(frame_count: int) -> list[int]:
    """Ascending then descending frame indices with endpoints not duplicated.

    Playback of the returned list, repeated, is periodic with period
    2N-2 (N >= 2) and every adjacent pair differs by exactly one frame,
    including across the wrap.
    """
    if frame_count < 1:
        raise InvariantError("frame_count must be >= 1")
    if frame_count == 1:
        return [0]
    return list(range(frame_count)) + list(range(frame_count - 2, 0, -1))
