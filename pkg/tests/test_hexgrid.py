import math
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexblur.hexgrid import (
    EQUIAREAL_SQUARE_APOTHEM_RATIO,
    SQRT3,
    AxialCoord,
    HexLayout,
    OffsetCoord,
    axial_to_cartesian,
    axial_to_offset,
    cartesian_to_axial,
    cube_round,
    fractional_axial,
    hex_distance,
    neighbors,
    offset_to_axial,
    offset_to_cartesian,
    ring,
)

ORIGIN = AxialCoord(0, 0)


def axial_patch(radius):
    return [AxialCoord(q, r)
            for q in range(-radius, radius + 1)
            for r in range(-radius, radius + 1)]


def brute_force_nearest(x, y, candidates):
    """Independent oracle: exhaustive argmin of squared distance."""
    best, best_d = None, math.inf
    for a in candidates:
        c = axial_to_cartesian(a)
        d = (c.x - x) ** 2 + (c.y - y) ** 2
        if d < best_d:
            best, best_d = a, d
    return best


class TestCartesianTransforms:
    @pytest.mark.parametrize("axial,expected", [
        ((0, 0), (0.0, 0.0)),
        ((1, 0), (1.5, -SQRT3 / 2)),
        ((2, -1), (3.0, 0.0)),
        ((0, 1), (0.0, -SQRT3)),
        ((-1, 1), (-1.5, -SQRT3 / 2)),
    ])
    def test_axial_golden(self, axial, expected):
        c = axial_to_cartesian(AxialCoord(*axial))
        assert c.x == pytest.approx(expected[0], abs=1e-12)
        assert c.y == pytest.approx(expected[1], abs=1e-12)

    @pytest.mark.parametrize("offset,expected", [
        ((0, 0), (0.0, 0.0)),
        ((0, 1), (0.0, SQRT3)),
        ((1, 0), (1.5, SQRT3 / 2)),
        ((-1, 0), (-1.5, SQRT3 / 2)),
        ((2, -1), (3.0, -SQRT3)),
    ])
    def test_offset_golden(self, offset, expected):
        c = offset_to_cartesian(OffsetCoord(*offset))
        assert c.x == pytest.approx(expected[0], abs=1e-12)
        assert c.y == pytest.approx(expected[1], abs=1e-12)

    def test_odd_column_shift_is_sqrt3_over_2(self):
        even = offset_to_cartesian(OffsetCoord(0, 0))
        odd = offset_to_cartesian(OffsetCoord(1, 0))
        assert odd.y - even.y == pytest.approx(SQRT3 / 2, abs=1e-12)

    def test_axial_matches_matrix_on_patch(self):
        # direct re-application of the 2x2 transform, written independently
        for a in axial_patch(20):
            c = axial_to_cartesian(a)
            assert abs(c.x - (1.5 * a.q + 0.0 * a.r)) <= 1e-12
            assert abs(c.y - (-SQRT3 / 2 * a.q - SQRT3 * a.r)) <= 1e-12

    def test_adjacent_centers_distance_sqrt3(self):
        for a in axial_patch(6):
            ca = axial_to_cartesian(a)
            for b in neighbors(a):
                cb = axial_to_cartesian(b)
                d = math.hypot(ca.x - cb.x, ca.y - cb.y)
                assert abs(d - SQRT3) <= 1e-12

    def test_adjacent_column_spacing(self):
        # diagonal neighbors differ by 3/2 in x and sqrt(3)/2 in y
        a = axial_to_cartesian(AxialCoord(0, 0))
        b = axial_to_cartesian(AxialCoord(1, 0))
        assert abs(abs(b.x - a.x) - 1.5) <= 1e-12
        assert abs(abs(b.y - a.y) - SQRT3 / 2) <= 1e-12


class TestOffsetAxialBijection:
    def test_origin_roundtrip(self):
        assert axial_to_offset(ORIGIN) == OffsetCoord(0, 0)
        assert offset_to_axial(OffsetCoord(0, 0)) == ORIGIN

    def test_roundtrip_on_patch(self):
        for a in axial_patch(20):
            assert offset_to_axial(axial_to_offset(a)) == a
        for col in range(-20, 21):
            for row in range(-20, 21):
                o = OffsetCoord(col, row)
                assert axial_to_offset(offset_to_axial(o)) == o

    def test_same_cartesian_image_on_patch(self):
        for a in axial_patch(20):
            ca = axial_to_cartesian(a)
            co = offset_to_cartesian(axial_to_offset(a))
            assert abs(ca.x - co.x) <= 1e-12
            assert abs(ca.y - co.y) <= 1e-12

    def test_axial_one_zero_matches_brute_force_center_match(self):
        # scan a 41x41 offset patch for the cell at the same center
        target = axial_to_cartesian(AxialCoord(1, 0))
        matches = [
            OffsetCoord(col, row)
            for col in range(-20, 21) for row in range(-20, 21)
            if abs(offset_to_cartesian(OffsetCoord(col, row)).x - target.x) < 1e-9
            and abs(offset_to_cartesian(OffsetCoord(col, row)).y - target.y) < 1e-9
        ]
        assert matches == [axial_to_offset(AxialCoord(1, 0))]

    @given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
    def test_roundtrip_property(self, q, r):
        a = AxialCoord(q, r)
        assert offset_to_axial(axial_to_offset(a)) == a
        o = OffsetCoord(q, r)
        assert axial_to_offset(offset_to_axial(o)) == o

    @given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
    def test_cube_sum_invariant(self, q, r):
        a = axial_to_offset(AxialCoord(q, r))
        b = offset_to_axial(OffsetCoord(q, r))
        assert b.q + b.r + b.s == 0


class TestPointToBin:
    def test_centers_map_to_themselves(self):
        for a in axial_patch(20):
            c = axial_to_cartesian(a)
            assert cartesian_to_axial(c) == a

    def test_known_point(self):
        # brute-forced over all centers with |q|,|r| <= 3
        assert brute_force_nearest(1.4, -0.9, axial_patch(3)) == AxialCoord(1, 0)
        assert cartesian_to_axial((1.4, -0.9)) == AxialCoord(1, 0)

    def test_matches_brute_force_on_random_points(self):
        rng = np.random.default_rng(7)
        pts = rng.uniform(-5.0, 5.0, size=(10_000, 2))
        candidates = axial_patch(9)
        centers = np.array([axial_to_cartesian(a) for a in candidates])
        d2 = ((pts[:, None, 0] - centers[None, :, 0]) ** 2
              + (pts[:, None, 1] - centers[None, :, 1]) ** 2)
        oracle = np.argmin(d2, axis=1)
        for (x, y), idx in zip(pts, oracle):
            assert cartesian_to_axial((x, y)) == candidates[idx]

    @pytest.mark.parametrize("bad", [(math.nan, 0.0), (0.0, math.inf), (-math.inf, 1.0)])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(ValueError):
            cartesian_to_axial(bad)

    @given(st.floats(-1e4, 1e4), st.floats(-1e4, 1e4))
    @settings(max_examples=300)
    def test_local_optimality(self, x, y):
        # nearest-center result is at least as close as all six neighbors
        a = cartesian_to_axial((x, y))
        ca = axial_to_cartesian(a)
        da = math.hypot(ca.x - x, ca.y - y)
        for nb in neighbors(a):
            cn = axial_to_cartesian(nb)
            dn = math.hypot(cn.x - x, cn.y - y)
            assert da <= dn + 1e-9

    def test_cube_round_repair_keeps_constraint(self):
        rng = np.random.default_rng(3)
        for x, y in rng.uniform(-30, 30, size=(500, 2)):
            qf, rf = fractional_axial(x, y)
            a = cube_round(qf, rf)
            assert a.q + a.r + a.s == 0


class TestRingsAndDistance:
    def test_ring_zero(self):
        assert ring(0) == [ORIGIN]

    def test_ring_negative_rejected(self):
        with pytest.raises(ValueError):
            ring(-1)

    @pytest.mark.parametrize("n", [1, 2, 3, 7, 25])
    def test_ring_cardinality_and_distance(self, n):
        shell = ring(n)
        assert len(shell) == 6 * n
        assert len(set(shell)) == 6 * n
        assert all(hex_distance(ORIGIN, a) == n for a in shell)

    def test_rings_tile_patch_without_duplicates(self):
        tiles = [a for n in range(0, 8) for a in ring(n)]
        assert len(tiles) == len(set(tiles)) == 1 + 3 * 7 * 8

    def test_distance_identity_and_symmetry(self):
        for a in axial_patch(4):
            assert hex_distance(a, a) == 0
            assert hex_distance(ORIGIN, a) == hex_distance(a, ORIGIN)

    def test_ring_one_all_at_distance_one(self):
        assert sorted(ring(1)) == sorted(neighbors(ORIGIN))
        assert all(hex_distance(ORIGIN, a) == 1 for a in ring(1))

    def test_distance_matches_bfs_oracle(self):
        # BFS over the adjacency graph restricted to a hex-distance ball;
        # shortest paths to the origin never need to leave the ball
        limit = 5
        dist = {ORIGIN: 0}
        queue = deque([ORIGIN])
        while queue:
            cur = queue.popleft()
            for nb in cur, *neighbors(cur):
                if nb not in dist and hex_distance(ORIGIN, nb) <= limit:
                    dist[nb] = dist[cur] + 1
                    queue.append(nb)
        for a, d in dist.items():
            assert hex_distance(ORIGIN, a) == d
        assert dist[AxialCoord(2, -1)] == 2

    @given(st.integers(-100, 100), st.integers(-100, 100),
           st.integers(-100, 100), st.integers(-100, 100),
           st.integers(-100, 100), st.integers(-100, 100))
    def test_triangle_inequality(self, q1, r1, q2, r2, q3, r3):
        a, b, c = AxialCoord(q1, r1), AxialCoord(q2, r2), AxialCoord(q3, r3)
        assert hex_distance(a, c) <= hex_distance(a, b) + hex_distance(b, c)


class TestConstants:
    def test_equiareal_square_ratio_from_first_principles(self):
        side = 1.0
        apothem = SQRT3 / 2 * side
        hex_area = 6 * (SQRT3 / 4) * side * side
        square_half_side = math.sqrt(hex_area) / 2
        ratio = apothem / square_half_side
        assert abs(ratio - EQUIAREAL_SQUARE_APOTHEM_RATIO) <= 1e-12
        assert EQUIAREAL_SQUARE_APOTHEM_RATIO == pytest.approx(1.0746, abs=1e-4)


class TestHexLayout:
    def test_validation(self):
        with pytest.raises(ValueError):
            HexLayout(scale_x=0.0)
        with pytest.raises(ValueError):
            HexLayout(scale_y=-1.0)
        with pytest.raises(ValueError):
            HexLayout(origin_x=math.nan)

    @given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
    def test_normalization_roundtrip(self, x, y):
        layout = HexLayout(12.5, -3.0, 0.25, 4.0)
        u, v = layout.to_normalized(x, y)
        x2, y2 = layout.to_data(u, v)
        assert x2 == pytest.approx(x, abs=1e-9)
        assert y2 == pytest.approx(y, abs=1e-9)

    def test_bin_center_data(self):
        layout = HexLayout(10.0, 20.0, 2.0, 3.0)
        cx, cy = layout.bin_center_data(AxialCoord(1, 0))
        assert cx == pytest.approx(10.0 + 1.5 * 2.0)
        assert cy == pytest.approx(20.0 + (-SQRT3 / 2) * 3.0)
