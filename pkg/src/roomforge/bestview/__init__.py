from .track import CameraTrack, load_track, save_track, track_from_dict, track_to_dict
from .select import (
    BestViewResult,
    FrameScore,
    camera_yaw_from_pose,
    lex_better,
    score_frame,
    select_best_view,
    visible_corners,
)
from .annotate import annotate_frame, load_frame_image

DEFAULT_DEPTH_MARGIN = 0.05  # meters, SLAM units

__all__ = [
    "CameraTrack",
    "load_track",
    "save_track",
    "track_from_dict",
    "track_to_dict",
    "BestViewResult",
    "FrameScore",
    "camera_yaw_from_pose",
    "lex_better",
    "score_frame",
    "select_best_view",
    "visible_corners",
    "annotate_frame",
    "load_frame_image",
    "DEFAULT_DEPTH_MARGIN",
]
