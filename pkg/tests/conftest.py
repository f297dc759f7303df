import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from roomforge.bestview import CameraTrack, load_track
from roomforge.scene import SceneModel, parse_scene

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_room_bytes() -> bytes:
    return (DATA_DIR / "fixture_room.json").read_bytes()


@pytest.fixture()
def fixture_scene(fixture_room_bytes) -> SceneModel:
    return parse_scene(fixture_room_bytes)


@pytest.fixture(scope="session")
def fixture_track_path() -> Path:
    return DATA_DIR / "fixture_track.json"


@pytest.fixture()
def fixture_track(fixture_track_path) -> CameraTrack:
    return load_track(fixture_track_path)
