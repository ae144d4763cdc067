import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hexblur.binning import (
    BinGrid,
    CsvParseError,
    DataPoint,
    Dataset,
    bin_points,
    parse_csv,
    suggest_layout,
    top_labels,
)
from hexblur.hexgrid import SQRT3, AxialCoord, HexLayout, axial_to_cartesian

UNIT = HexLayout()

# exactly representable doubles so arithmetic identities hold bit-for-bit
dyadic = st.integers(-5120, 5120).map(lambda k: k / 1024.0)


def grids_equal(a: BinGrid, b: BinGrid) -> bool:
    if set(a.bins) != set(b.bins):
        return False
    return all(
        a.bins[k].total_weight == b.bins[k].total_weight
        and a.bins[k].label_counts == b.bins[k].label_counts
        for k in a.bins
    )


def oracle_bin(points, layout):
    """Exhaustive nearest-center assignment plus fsum aggregation."""
    totals = {}
    for p in points:
        u = (p.x - layout.origin_x) / layout.scale_x
        v = (p.y - layout.origin_y) / layout.scale_y
        radius = int(abs(u) + abs(v)) + 3
        best, best_d = None, math.inf
        for q in range(-radius, radius + 1):
            for r in range(-radius, radius + 1):
                c = axial_to_cartesian(AxialCoord(q, r))
                d = (c.x - u) ** 2 + (c.y - v) ** 2
                if d < best_d:
                    best, best_d = AxialCoord(q, r), d
        totals.setdefault(best, []).append(p.weight)
    return {a: math.fsum(ws) for a, ws in totals.items()}


class TestCsvParsing:
    def test_header_detected_and_skipped(self):
        ds, skipped = parse_csv("x,y,weight\n1,2\n3,4\n")
        assert len(ds) == 2 and not skipped

    def test_no_header(self):
        ds, _ = parse_csv("1,2\n3,4\n")
        assert len(ds) == 2

    def test_column_forms(self):
        ds, _ = parse_csv("1,2\n3,4,2.5\n5,6,1.5,alkaloid\n")
        pts = list(ds.points())
        assert pts[0].weight == 1.0 and pts[0].label is None
        assert pts[1].weight == 2.5 and pts[1].label is None
        assert pts[2].weight == 1.5 and pts[2].label == "alkaloid"

    def test_empty_label_means_unlabeled(self):
        ds, _ = parse_csv("1,2,1,\n")
        assert next(ds.points()).label is None
        assert ds.labels is None

    def test_blank_lines_skipped(self):
        ds, _ = parse_csv("1,2\n\n3,4\n\n")
        assert len(ds) == 2

    def test_empty_text(self):
        ds, _ = parse_csv("")
        assert ds.is_empty
        with pytest.raises(ValueError):
            ds.bounds

    def test_header_only(self):
        ds, _ = parse_csv("x,y\n")
        assert ds.is_empty

    @pytest.mark.parametrize("text,line", [
        ("1,2\nfoo,3\n", 2),
        ("1,2\n3\n", 2),
        ("1,2,3,4,5\n", 1),
        ("x,y\n1,2\n3,nope\n", 3),
        ("1,nan\n", 1),
        ("1,2,-0.5\n", 1),
        ("1,2,inf\n", 1),
    ])
    def test_bad_rows_abort_with_line_number(self, text, line):
        with pytest.raises(CsvParseError) as err:
            parse_csv(text)
        assert err.value.line == line
        assert f"line {line}" in str(err.value)

    def test_permissive_skips_and_reports(self):
        ds, skipped = parse_csv("1,2\nbad,row\n3,4\n", permissive=True)
        assert len(ds) == 2
        assert [line for line, _ in skipped] == [2]

    def test_bounds_cached(self):
        ds, _ = parse_csv("0,10\n4,-2\n")
        assert ds.bounds == (0.0, 4.0, -2.0, 10.0)


class TestDataset:
    def test_from_points_validation(self):
        with pytest.raises(ValueError, match="point 1"):
            Dataset.from_points([DataPoint(0, 0), DataPoint(math.nan, 0)])
        with pytest.raises(ValueError, match="negative"):
            Dataset.from_points([DataPoint(0, 0, weight=-1)])

    def test_points_roundtrip(self):
        pts = [DataPoint(1, 2, 3, "a"), DataPoint(4, 5)]
        ds = Dataset.from_points(pts)
        assert list(ds.points()) == pts


class TestBinPoints:
    def test_single_point_at_origin(self):
        grid = bin_points(Dataset.from_points([DataPoint(0, 0)]), UNIT)
        assert set(grid.bins) == {AxialCoord(0, 0)}
        assert grid.value(AxialCoord(0, 0)) == 1.0

    def test_points_at_known_centers(self):
        c = axial_to_cartesian(AxialCoord(1, 0))
        pts = [DataPoint(0, 0), DataPoint(0, 0), DataPoint(c.x, c.y)]
        grid = bin_points(Dataset.from_points(pts), UNIT)
        assert grid.value(AxialCoord(0, 0)) == 2.0
        assert grid.value(AxialCoord(1, 0)) == 1.0
        assert len(grid) == 2

    def test_empty_dataset_gives_empty_grid(self):
        grid = bin_points(Dataset.from_points([]), UNIT)
        assert len(grid) == 0
        assert grid.total_weight() == 0.0

    def test_labels_accumulate(self):
        pts = [DataPoint(0, 0, 2, "a"), DataPoint(0, 0, 1, "a"),
               DataPoint(0, 0, 4, "b"), DataPoint(0, 0, 5)]
        grid = bin_points(Dataset.from_points(pts), UNIT)
        agg = grid.bins[AxialCoord(0, 0)]
        assert agg.total_weight == 12.0
        assert agg.label_counts == {"a": 3.0, "b": 4.0}

    def test_zero_weight_unlabeled_not_stored(self):
        grid = bin_points(Dataset.from_points([DataPoint(0, 0, 0.0)]), UNIT)
        assert len(grid) == 0

    def test_zero_weight_labeled_is_stored(self):
        grid = bin_points(Dataset.from_points([DataPoint(0, 0, 0.0, "a")]), UNIT)
        assert grid.bins[AxialCoord(0, 0)].label_counts == {"a": 0.0}

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(11)
        pts = [DataPoint(x, y, w) for x, y, w in
               zip(rng.uniform(-4, 4, 800), rng.uniform(-4, 4, 800),
                   rng.uniform(0, 2, 800))]
        layout = HexLayout(-1.0, 0.5, 0.7, 1.3)
        grid = bin_points(Dataset.from_points(pts), layout)
        oracle = oracle_bin(pts, layout)
        assert set(grid.bins) == set(oracle)
        for a, total in oracle.items():
            assert grid.value(a) == total  # same multiset + fsum => exact

    @given(st.lists(st.tuples(dyadic, dyadic, st.floats(0, 100)), max_size=60))
    @settings(max_examples=100)
    def test_mass_conservation(self, rows):
        pts = [DataPoint(x, y, w) for x, y, w in rows]
        grid = bin_points(Dataset.from_points(pts), HexLayout(0, 0, 0.5, 2.0))
        expect = math.fsum(w for _, _, w in rows)
        assert grid.total_weight() == pytest.approx(expect, rel=1e-9, abs=1e-12)

    @given(st.lists(st.tuples(dyadic, dyadic), min_size=1, max_size=50))
    @settings(max_examples=60)
    def test_translation_equivariance(self, rows):
        # dyadic inputs keep (x+t) - (origin+t) == x - origin exact
        t = 35.5
        pts = [DataPoint(x, y) for x, y in rows]
        moved = [DataPoint(x + t, y + t) for x, y in rows]
        base = bin_points(Dataset.from_points(pts), HexLayout(1.25, -2.5, 0.5, 0.25))
        shifted = bin_points(Dataset.from_points(moved),
                             HexLayout(1.25 + t, -2.5 + t, 0.5, 0.25))
        assert grids_equal(base, shifted)

    @given(st.lists(st.tuples(dyadic, dyadic), min_size=1, max_size=50))
    @settings(max_examples=60)
    def test_scale_equivariance(self, rows):
        # doubling x and scale_x is exact in binary floating point
        pts = [DataPoint(x, y) for x, y in rows]
        doubled = [DataPoint(2.0 * x, y) for x, y in rows]
        base = bin_points(Dataset.from_points(pts), HexLayout(0.5, 0.0, 0.75, 1.5))
        scaled = bin_points(Dataset.from_points(doubled), HexLayout(1.0, 0.0, 1.5, 1.5))
        assert grids_equal(base, scaled)

    def test_order_independence_exact(self):
        rng = np.random.default_rng(5)
        pts = [DataPoint(x, y, w, lbl) for x, y, w, lbl in
               zip(rng.uniform(-3, 3, 500), rng.uniform(-3, 3, 500),
                   rng.uniform(0, 1, 500),
                   rng.choice(["a", "b", "c"], 500))]
        shuffled = pts.copy()
        random.Random(99).shuffle(shuffled)
        g1 = bin_points(Dataset.from_points(pts), UNIT)
        g2 = bin_points(Dataset.from_points(shuffled), UNIT)
        assert grids_equal(g1, g2)


class TestSuggestLayout:
    def test_unit_square_target_ten(self):
        ds = Dataset.from_points([DataPoint(0, 0), DataPoint(1, 1)])
        layout = suggest_layout(ds, 10)
        assert layout.scale_x == 1.0 / 15.0
        assert layout.scale_y == pytest.approx(1.0 / (SQRT3 * 10))
        assert (layout.origin_x, layout.origin_y) == (0.0, 0.0)

    def test_degenerate_extent_falls_back_to_unit(self):
        ds = Dataset.from_points([DataPoint(2, 3), DataPoint(2, 3)])
        layout = suggest_layout(ds, 10)
        assert (layout.scale_x, layout.scale_y) == (1.0, 1.0)

    def test_empty_dataset_rejected(self):
        with pytest.raises(ValueError):
            suggest_layout(Dataset.from_points([]), 10)

    def test_bad_target_rejected(self):
        ds = Dataset.from_points([DataPoint(0, 0), DataPoint(1, 1)])
        with pytest.raises(ValueError):
            suggest_layout(ds, 0)

    def test_gaussian_cloud_column_count_near_target(self):
        rng = np.random.default_rng(17)
        xs = rng.normal(50.0, 10.0, 5000)
        ys = rng.normal(-2.0, 1.0, 5000)
        ds = Dataset(xs, ys, np.ones(5000))
        target = 12
        grid = bin_points(ds, suggest_layout(ds, target))
        occupied_columns = len({a.q for a in grid.bins})
        assert abs(occupied_columns - target) <= 2


class TestTopLabels:
    def make_grid(self, counts):
        ds = Dataset.from_points(
            [DataPoint(0, 0, w, lbl) for lbl, w in counts.items()])
        return bin_points(ds, UNIT)

    def test_missing_bin_empty(self):
        grid = self.make_grid({"a": 1.0})
        assert top_labels(grid, AxialCoord(5, 5), 3) == []

    def test_max_selection(self):
        grid = self.make_grid({"a": 3.0, "b": 1.0})
        assert top_labels(grid, AxialCoord(0, 0), 1) == [("a", 3.0)]

    def test_lexicographic_tie_break(self):
        grid = self.make_grid({"b": 2.0, "a": 2.0})
        assert top_labels(grid, AxialCoord(0, 0), 2) == [("a", 2.0), ("b", 2.0)]

    def test_k_limits_output(self):
        grid = self.make_grid({"a": 5.0, "b": 4.0, "c": 3.0})
        assert top_labels(grid, AxialCoord(0, 0), 2) == [("a", 5.0), ("b", 4.0)]

    def test_k_must_be_positive(self):
        grid = self.make_grid({"a": 1.0})
        with pytest.raises(ValueError):
            top_labels(grid, AxialCoord(0, 0), 0)
