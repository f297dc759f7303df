import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import point_in_convex, voxel_iou
from roomforge.geometry import (
    CameraIntrinsics,
    CameraPose,
    Polygon2D,
    Sim3Transform,
    box_iou,
    clip_convex,
    convex_hull,
    footprint_polygon,
    point_in_polygon,
    polygon_area,
    project_point,
    rot_z,
    world_to_slam_box,
)
from roomforge.scene import OrientedBox

K = CameraIntrinsics(fx=500, fy=500, cx=320, cy=240, width=640, height=480)
IDENTITY_POSE = CameraPose(frame_index=0, r_cw=np.eye(3), t_cw=np.zeros(3))


def make_box(center, size, yaw=0.0) -> OrientedBox:
    return OrientedBox(center=np.asarray(center, float), size=np.asarray(size, float), yaw=yaw)


class TestSim3:
    def test_identity_leaves_box_unchanged(self):
        box = make_box([1, 2, 3], [2, 1, 0.5], yaw=0.3)
        out = world_to_slam_box(box, Sim3Transform.identity())
        assert np.allclose(out.center, box.center)
        assert np.allclose(out.size, box.size)
        assert out.yaw == pytest.approx(box.yaw)

    def test_scale_translation_mapping(self):
        # c_slam = (1/s) R^T (c_world - t); d_slam = d/s
        t = Sim3Transform(rotation=np.eye(3), translation=[1, 0, 0], scale=2.0)
        out = world_to_slam_box(make_box([3, 0, 0], [2, 2, 2]), t)
        assert np.allclose(out.center, [1, 0, 0])
        assert np.allclose(out.size, [1, 1, 1])
        assert out.yaw == pytest.approx(0.0)

    def test_rotation_maps_yaw(self):
        t = Sim3Transform(rotation=rot_z(math.pi / 2), translation=np.zeros(3), scale=1.0)
        out = world_to_slam_box(make_box([0, 0, 0], [1, 1, 1], yaw=0.0), t)
        assert out.yaw == pytest.approx(-math.pi / 2)

    @given(
        yaw_t=st.floats(-3.1, 3.1),
        yaw_b=st.floats(-3.1, 3.1),
        scale=st.floats(0.2, 5.0),
        tx=st.floats(-10, 10),
        ty=st.floats(-10, 10),
        tz=st.floats(-3, 3),
    )
    @settings(max_examples=100, deadline=None)
    def test_round_trip_under_inverse(self, yaw_t, yaw_b, scale, tx, ty, tz):
        # gravity-consistent alignment: rotation about +z
        t = Sim3Transform(rotation=rot_z(yaw_t), translation=[tx, ty, tz], scale=scale)
        box = make_box([1.5, -2.0, 0.8], [1.2, 0.7, 0.9], yaw=yaw_b)
        back = world_to_slam_box(world_to_slam_box(box, t), t.inverse())
        assert np.allclose(back.center, box.center, atol=1e-9)
        assert np.allclose(back.size, box.size, atol=1e-9)
        delta = (back.yaw - box.yaw + math.pi) % (2 * math.pi) - math.pi
        assert abs(delta) < 1e-9


class TestProjection:
    def test_principal_ray(self):
        assert project_point([0, 0, 2], IDENTITY_POSE, K) == (320.0, 240.0, 2.0)

    def test_off_axis(self):
        assert project_point([1, 0, 2], IDENTITY_POSE, K) == (570.0, 240.0, 2.0)

    def test_behind_camera_rejected(self):
        assert project_point([0, 0, -1], IDENTITY_POSE, K) is None

    def test_outside_image_rejected(self):
        # u = 500*2/1 + 320 = 1320 > W
        assert project_point([2, 0, 1], IDENTITY_POSE, K) is None

    @given(
        x=st.floats(-5, 5),
        y=st.floats(-5, 5),
        z=st.floats(-5, 5),
    )
    @settings(max_examples=200, deadline=None)
    def test_accepted_points_satisfy_validity(self, x, y, z):
        hit = project_point([x, y, z], IDENTITY_POSE, K)
        if hit is not None:
            u, v, depth = hit
            assert depth > 0
            assert 0 < u < K.width
            assert 0 < v < K.height


class TestHullAndPolygon:
    def test_square_with_interior_point(self):
        pts = [(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)]
        hull = convex_hull(pts)
        assert len(hull) == 4
        assert polygon_area(hull) == pytest.approx(1.0)

    def test_collinear_degenerates(self):
        hull = convex_hull([(0, 0), (1, 1), (2, 2)])
        assert len(hull) == 2
        assert polygon_area(hull) == 0.0

    def test_random_disc_points_contained(self):
        rng = np.random.default_rng(7)
        angles = rng.uniform(0, 2 * math.pi, 100)
        radii = np.sqrt(rng.uniform(0, 1, 100))
        pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
        hull = convex_hull(pts)
        assert polygon_area(hull) <= math.pi + 1e-9
        for p in pts:
            assert point_in_polygon(p, hull, tol=1e-9)
            assert point_in_convex(p, hull.vertices, tol=1e-9)

    def test_area_cases(self):
        square = Polygon2D([(0, 0), (1, 0), (1, 1), (0, 1)])
        assert polygon_area(square) == pytest.approx(1.0)
        assert polygon_area(Polygon2D([(0, 0), (2, 2)])) == 0.0
        tri = Polygon2D([(0, 0), (2, 0), (0, 2)])
        assert polygon_area(tri) == pytest.approx(2.0)

    def test_point_in_polygon_boundary_inclusive(self):
        square = Polygon2D([(0, 0), (1, 0), (1, 1), (0, 1)])
        assert point_in_polygon((0.5, 0.5), square)
        assert not point_in_polygon((2, 2), square)
        assert point_in_polygon((1.0, 0.5), square)

    def test_clip_self_is_identity(self):
        square = Polygon2D([(0, 0), (2, 0), (2, 2), (0, 2)])
        out = clip_convex(square, square)
        assert polygon_area(out) == pytest.approx(4.0)

    def test_clip_partial_overlap(self):
        a = Polygon2D([(0, 0), (2, 0), (2, 2), (0, 2)])
        b = Polygon2D([(1, 1), (3, 1), (3, 3), (1, 3)])
        assert polygon_area(clip_convex(a, b)) == pytest.approx(1.0)


class TestFootprint:
    def test_axis_aligned(self):
        poly = footprint_polygon(make_box([0, 0, 0], [2, 1, 1]))
        v = poly.vertices
        assert v[:, 0].min() == pytest.approx(-1) and v[:, 0].max() == pytest.approx(1)
        assert v[:, 1].min() == pytest.approx(-0.5) and v[:, 1].max() == pytest.approx(0.5)

    def test_quarter_turn_swaps(self):
        poly = footprint_polygon(make_box([0, 0, 0], [2, 1, 1], yaw=math.pi / 2))
        v = poly.vertices
        assert v[:, 0].min() == pytest.approx(-0.5) and v[:, 0].max() == pytest.approx(0.5)
        assert v[:, 1].min() == pytest.approx(-1) and v[:, 1].max() == pytest.approx(1)

    def test_diagonal_unit_square(self):
        poly = footprint_polygon(make_box([0, 0, 0], [1, 1, 1], yaw=math.pi / 4))
        dists = np.linalg.norm(poly.vertices, axis=1)
        assert np.allclose(dists, math.sqrt(2) / 2)


class TestBoxIoU:
    def test_identical(self):
        box = make_box([0.3, -0.2, 0.5], [1.2, 0.8, 1.0], yaw=0.4)
        assert box_iou(box, box) == pytest.approx(1.0, abs=1e-9)

    def test_half_shift_unit_cubes(self):
        a = make_box([0, 0, 0.5], [1, 1, 1])
        b = make_box([0.5, 0, 0.5], [1, 1, 1])
        assert box_iou(a, b) == pytest.approx(1 / 3)

    def test_disjoint(self):
        a = make_box([0, 0, 0], [1, 1, 1])
        b = make_box([10, 0, 0], [1, 1, 1])
        assert box_iou(a, b) == 0.0

    def test_square_rotated_quarter_turn(self):
        a = make_box([0, 0, 0], [1, 1, 0.4])
        b = make_box([0, 0, 0], [1, 1, 0.4], yaw=math.pi / 2)
        assert box_iou(a, b) == pytest.approx(1.0, abs=1e-9)

    def test_symmetry_and_bounds(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            a = make_box(rng.uniform(-1, 1, 3), rng.uniform(0.2, 2.0, 3), rng.uniform(-3, 3))
            b = make_box(rng.uniform(-1, 1, 3), rng.uniform(0.2, 2.0, 3), rng.uniform(-3, 3))
            ab, ba = box_iou(a, b), box_iou(b, a)
            assert ab == pytest.approx(ba, abs=1e-9)
            assert 0.0 <= ab <= 1.0

    def test_matches_voxel_oracle(self):
        # the acceptance suite runs the full 200-pair version; this is the
        # fast regression slice
        rng = np.random.default_rng(3)
        for _ in range(20):
            center = rng.uniform(-0.5, 0.5, 3)
            a = make_box(center, rng.uniform(0.3, 1.8, 3), rng.uniform(-3.1, 3.1))
            b = make_box(center + rng.uniform(-0.4, 0.4, 3), rng.uniform(0.3, 1.8, 3), rng.uniform(-3.1, 3.1))
            assert box_iou(a, b) == pytest.approx(voxel_iou(a, b, 96), abs=0.02)
