import math

import numpy as np
import pytest
from PIL import Image

from roomforge.bestview import (
    CameraTrack,
    FrameScore,
    annotate_frame,
    camera_yaw_from_pose,
    lex_better,
    load_track,
    save_track,
    score_frame,
    select_best_view,
    visible_corners,
)
from roomforge.errors import InvariantError, NoVisibleFrame
from roomforge.geometry import CameraIntrinsics, CameraPose, Polygon2D, Sim3Transform
from roomforge.scene import EntityKind, OrientedBox, SceneEntity, SceneModel

K = CameraIntrinsics(fx=500, fy=500, cx=320, cy=240, width=640, height=480)

# camera looking along world +y, z-up, image y pointing down
R_LOOK_PLUS_Y = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])


def look_plus_y_pose(index: int, position) -> CameraPose:
    p = np.asarray(position, dtype=float)
    return CameraPose(frame_index=index, r_cw=R_LOOK_PLUS_Y, t_cw=-R_LOOK_PLUS_Y @ p)


def make_entity(eid, center, size, yaw=0.0, kind=EntityKind.OBJECT, host=None) -> SceneEntity:
    return SceneEntity(
        id=eid,
        kind=kind,
        label=eid,
        box=OrientedBox(center=center, size=size, yaw=yaw),
        host_wall_id=host,
    )


@pytest.fixture()
def three_frame_track() -> CameraTrack:
    # frame 0: too close, clips the front corners; frame 1: centered, sees
    # all 8; frame 2: sees all 8 but off-center
    poses = [
        look_plus_y_pose(0, (0.0, -0.9, 1.0)),
        look_plus_y_pose(1, (0.0, -4.0, 1.0)),
        look_plus_y_pose(2, (0.8, -4.0, 1.0)),
    ]
    return CameraTrack(intrinsics=K, poses=poses, sim3=Sim3Transform.identity())


@pytest.fixture()
def target_entity() -> SceneEntity:
    return make_entity("target", (0.0, 0.0, 1.0), (1.0, 1.0, 1.0))


OCCLUDER_BOX = dict(center=(0.0, -2.0, 1.0), size=(1.6, 0.3, 1.6))


class TestLexOrder:
    def test_centering_breaks_visibility_ties(self):
        assert not lex_better(FrameScore(8, 10, 200), FrameScore(8, 5, 100))
        assert lex_better(FrameScore(8, 5, 100), FrameScore(8, 10, 200))

    def test_visibility_dominates(self):
        assert not lex_better(FrameScore(7, 1, 500), FrameScore(8, 100, 10))

    def test_sentinel_never_wins(self):
        sentinel = FrameScore.sentinel()
        assert lex_better(FrameScore(1, 9999, 0), sentinel)
        assert not lex_better(sentinel, FrameScore(1, 9999, 0))
        assert not lex_better(sentinel, sentinel)

    def test_area_breaks_remaining_ties(self):
        assert lex_better(FrameScore(8, 5, 200), FrameScore(8, 5, 100))


class TestScoreFrame:
    def test_centered_survivors(self):
        survivors = [(0, 320.0, 240.0, 1.0), (1, 320.0, 240.0, 2.0)]
        score = score_frame(survivors, K)
        assert score.center_dist == 0.0
        assert score.vis_cnt == 2

    def test_square_area(self):
        survivors = [
            (0, 100.0, 100.0, 1.0),
            (1, 200.0, 100.0, 1.0),
            (2, 200.0, 200.0, 1.0),
            (3, 100.0, 200.0, 1.0),
        ]
        assert score_frame(survivors, K).vis_area == pytest.approx(10000.0)

    def test_empty_is_sentinel(self):
        assert score_frame([], K).is_sentinel


class TestVisibleCorners:
    def _track_one_pose(self) -> CameraTrack:
        pose = CameraPose(frame_index=0, r_cw=np.eye(3), t_cw=np.zeros(3))
        return CameraTrack(intrinsics=K, poses=[pose], sim3=Sim3Transform.identity())

    def test_unoccluded_frontal_view_keeps_all_eight(self, three_frame_track, target_entity):
        survivors = visible_corners(
            target_entity, three_frame_track.poses[1], three_frame_track, [], 0.05
        )
        assert len(survivors) == 8

    def test_corner_behind_occluder_discarded(self):
        # occluder near depth 1.0; corner depths ~2.5-3.5; 1.05 < 2.5 holds
        track = self._track_one_pose()
        target = make_entity("t", (0, 0, 3.0), (0.5, 0.5, 1.0))
        occluder = make_entity("o", (0, 0, 1.2), (0.8, 0.8, 0.4))
        survivors = visible_corners(target, track.poses[0], track, [occluder], 0.05)
        assert survivors == []

    def test_corner_in_front_of_occluder_kept(self):
        track = self._track_one_pose()
        target = make_entity("t", (0, 0, 0.9), (0.5, 0.5, 0.05))
        occluder = make_entity("o", (0, 0, 1.2), (0.8, 0.8, 0.4))
        survivors = visible_corners(target, track.poses[0], track, [occluder], 0.05)
        assert len(survivors) == 8

    def test_occluders_never_increase_visibility(self, three_frame_track, target_entity):
        occluder = make_entity("occ", **OCCLUDER_BOX)
        for pose in three_frame_track.poses:
            free = visible_corners(target_entity, pose, three_frame_track, [], 0.05)
            blocked = visible_corners(
                target_entity, pose, three_frame_track, [occluder], 0.05
            )
            assert len(blocked) <= len(free)


class TestSelectBestView:
    def test_centered_frame_wins(self, three_frame_track, target_entity):
        scene = SceneModel(entities=[target_entity])
        result = select_best_view(target_entity, scene, three_frame_track)
        assert result.frame_index == 1
        assert result.score.vis_cnt == 8
        assert result.score.center_dist == pytest.approx(0.0, abs=1e-9)
        assert target_entity.best_frame_pose is not None
        assert np.allclose(
            target_entity.best_frame_pose, three_frame_track.poses[1].matrix4()
        )

    def test_occluder_flips_selection(self, three_frame_track, target_entity):
        occluder = make_entity("occ", **OCCLUDER_BOX)
        scene = SceneModel(entities=[target_entity, occluder])
        result = select_best_view(target_entity, scene, three_frame_track)
        assert result.frame_index == 2

    def test_selected_score_dominates_exhaustive_rescan(self, three_frame_track, target_entity):
        scene = SceneModel(entities=[target_entity])
        result = select_best_view(target_entity, scene, three_frame_track)
        for pose in three_frame_track.poses:
            survivors = visible_corners(target_entity, pose, three_frame_track, [], 0.05)
            other = score_frame(survivors, K)
            if pose.frame_index != result.frame_index:
                assert not lex_better(other, result.score)

    def test_object_behind_all_cameras(self, three_frame_track):
        hidden = make_entity("hidden", (0.0, -10.0, 1.0), (1.0, 1.0, 1.0))
        scene = SceneModel(entities=[hidden])
        with pytest.raises(NoVisibleFrame):
            select_best_view(hidden, scene, three_frame_track)

    def test_deterministic_selection(self, three_frame_track, target_entity):
        scene = SceneModel(entities=[target_entity])
        first = select_best_view(target_entity, scene, three_frame_track)
        for _ in range(9):
            again = select_best_view(target_entity, scene, three_frame_track)
            assert again.frame_index == first.frame_index
            assert again.score == first.score

    def test_fixture_room_objects_selectable(self, fixture_scene, fixture_track):
        sofa = fixture_scene.entity("obj_sofa")
        result = select_best_view(sofa, fixture_scene, fixture_track)
        assert result.score.vis_cnt >= 1
        assert any(p.frame_index == result.frame_index for p in fixture_track.poses)


class TestAnnotate:
    def test_stroke_on_edge_midpoints(self):
        img = Image.new("RGB", (640, 480), (10, 10, 10))
        hull = Polygon2D([(100, 100), (300, 100), (300, 300), (100, 300)])
        out = annotate_frame(img, hull, "sofa")
        assert out.size == img.size
        px = out.load()
        for mid in [(200, 100), (300, 200), (200, 300), (100, 200)]:
            assert px[mid] == (0, 255, 0)
        # input untouched
        assert img.load()[(200, 100)] == (10, 10, 10)

    def test_degenerate_two_point_hull(self):
        img = Image.new("RGB", (640, 480))
        out = annotate_frame(img, Polygon2D([(50, 50), (200, 120)]), "edge")
        assert out.size == img.size
        assert any(
            out.load()[(x, y)] == (0, 255, 0)
            for x in range(45, 205)
            for y in range(45, 125)
        )

    def test_dimensions_always_preserved(self):
        img = Image.new("RGB", (123, 77))
        out = annotate_frame(img, Polygon2D([(10, 10), (50, 10), (30, 40)]), "tri")
        assert out.size == (123, 77)


class TestTrackIO:
    def test_round_trip(self, fixture_track, tmp_path):
        path = tmp_path / "track.json"
        save_track(fixture_track, path)
        again = load_track(path)
        assert len(again.poses) == len(fixture_track.poses)
        assert again.intrinsics == fixture_track.intrinsics
        assert np.allclose(again.sim3.rotation, fixture_track.sim3.rotation)
        for a, b in zip(again.poses, fixture_track.poses):
            assert a.frame_index == b.frame_index
            assert np.allclose(a.r_cw, b.r_cw)

    def test_indices_must_increase(self):
        pose = CameraPose(frame_index=0, r_cw=np.eye(3), t_cw=np.zeros(3))
        with pytest.raises(InvariantError):
            CameraTrack(intrinsics=K, poses=[pose, pose], sim3=Sim3Transform.identity())


class TestCameraYaw:
    def test_identity_alignment(self):
        pose = look_plus_y_pose(0, (0, -4, 1))
        yaw = camera_yaw_from_pose(pose.matrix4(), None)
        assert yaw == pytest.approx(math.pi / 2)  # looking along +y

    def test_alignment_rotation_applied(self):
        pose = look_plus_y_pose(0, (0, -4, 1))
        sim3 = Sim3Transform(
            rotation=np.array(
                [[math.cos(0.3), -math.sin(0.3), 0], [math.sin(0.3), math.cos(0.3), 0], [0, 0, 1]]
            ),
            translation=np.zeros(3),
            scale=1.0,
        )
        yaw = camera_yaw_from_pose(pose.matrix4(), sim3)
        assert yaw == pytest.approx(math.pi / 2 + 0.3)
