import math
import re

import pytest

from hexblur.binning import BinAggregate, BinGrid, DataPoint, Dataset, bin_points
from hexblur.blur import BlurParams, apply_blur, build_stencil
from hexblur.hexgrid import AxialCoord, HexLayout
from hexblur.render import (
    RenderSpec,
    color_hex,
    colormap_rgb,
    grayscale_rgb,
    normalize_value,
    render_svg,
    tile_fill,
    viridis_rgb,
)

UNIT = HexLayout()

POLYGON_RE = re.compile(r'<polygon points="([^"]+)" fill="(#[0-9a-f]{6})"')


def polygons(svg):
    return [(pts.split(" "), fill) for pts, fill in POLYGON_RE.findall(svg)]


def vertex_list(points):
    return [tuple(map(float, p.split(","))) for p in points]


def single_bin_grid(value=1.0):
    return BinGrid(UNIT, {AxialCoord(0, 0): BinAggregate(value)})


class TestNormalizeValue:
    def test_top_of_linear_ramp(self):
        assert normalize_value(5.0, 5.0, 1.0) == 1.0

    def test_zero_maps_to_zero(self):
        assert normalize_value(0.0, 3.0, 2.5) == 0.0

    def test_saturation_clips(self):
        assert normalize_value(0.4 * 7.0, 7.0, 2.5) == 1.0

    def test_vmax_zero_maps_all_to_zero(self):
        assert normalize_value(1.0, 0.0, 2.0) == 0.0

    def test_monotone_in_value(self):
        vals = [normalize_value(v, 10.0, 2.5) for v in (0, 1, 2, 3, 4, 5)]
        assert vals == sorted(vals)

    def test_saturation_one_is_plain_linear(self):
        assert normalize_value(2.5, 10.0, 1.0) == 0.25


class TestColormaps:
    def test_grayscale_endpoints_exact(self):
        assert grayscale_rgb(0.0) == (255, 255, 255)
        assert grayscale_rgb(1.0) == (0, 0, 0)

    def test_grayscale_is_linear(self):
        assert grayscale_rgb(0.5) == (128, 128, 128)

    def test_viridis_endpoints_match_reference(self):
        # published reference endpoints: (0.267004, 0.004874, 0.329415)
        # and (0.993248, 0.906157, 0.143936)
        for got, want in zip(viridis_rgb(0.0), (68, 1, 84)):
            assert abs(got - want) <= 1
        for got, want in zip(viridis_rgb(1.0), (253, 231, 37)):
            assert abs(got - want) <= 1

    def test_viridis_interpolates_between_entries(self):
        a = viridis_rgb(100 / 255)
        b = viridis_rgb(101 / 255)
        mid = viridis_rgb(100.5 / 255)
        for lo, hi, m in zip(a, b, mid):
            assert min(lo, hi) <= m <= max(lo, hi)

    def test_unknown_colormap_rejected(self):
        with pytest.raises(ValueError):
            colormap_rgb("plasma", 0.5)

    def test_color_hex(self):
        assert color_hex((255, 0, 16)) == "#ff0010"


class TestRenderSpec:
    @pytest.mark.parametrize("kwargs", [
        dict(colormap="plasma"),
        dict(saturation=0.5),
        dict(tile_side_px=0.0),
        dict(value_floor=-1.0),
        dict(stroke_width=0.0),
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            RenderSpec(**kwargs)


class TestRenderSvg:
    def test_empty_grid_background_only(self):
        svg = render_svg(BinGrid(UNIT, {}), RenderSpec())
        assert "<rect" in svg and "<polygon" not in svg
        assert svg.startswith('<?xml version="1.0"')

    def test_single_unit_bin_is_black(self):
        svg = render_svg(single_bin_grid(), RenderSpec())
        polys = polygons(svg)
        assert len(polys) == 1
        assert polys[0][1] == "#000000"

    def test_every_polygon_has_six_vertices(self):
        grid = bin_points(Dataset.from_points(
            [DataPoint(x / 10, y / 10) for x in range(-20, 21, 4)
             for y in range(-20, 21, 4)]), UNIT)
        svg = render_svg(grid, RenderSpec())
        polys = polygons(svg)
        assert len(polys) == len(grid)
        assert all(len(points) == 6 for points, _ in polys)

    def test_byte_identical_across_runs(self):
        grid = apply_blur(single_bin_grid(),
                          build_stencil(BlurParams(2, 1, 1e-3, "center_relative")))
        spec = RenderSpec(colormap="viridis", saturation=2.5)
        assert render_svg(grid, spec) == render_svg(grid, spec)

    def test_emission_order_sorted_by_qr(self):
        grid = BinGrid(UNIT, {
            AxialCoord(1, 0): BinAggregate(1.0),
            AxialCoord(-1, 0): BinAggregate(2.0),
            AxialCoord(0, 0): BinAggregate(3.0),
        })
        svg = render_svg(grid, RenderSpec())
        polys = polygons(svg)
        # x positions must ascend with q for this grid
        first_x = [vertex_list(points)[0][0] for points, _ in polys]
        assert first_x == sorted(first_x)

    def test_diagonal_neighbors_darker_than_vertical(self):
        grid = apply_blur(single_bin_grid(),
                          build_stencil(BlurParams(2, 1, 1e-3, "center_relative")))
        svg = render_svg(grid, RenderSpec())
        order = [a for a, _ in grid.sorted_items()]
        polys = polygons(svg)
        diag_fill = polys[order.index(AxialCoord(1, -1))][1]
        vert_fill = polys[order.index(AxialCoord(0, -1))][1]
        # grayscale: darker = smaller channel value; 0.519 -> darker than 0.223
        assert int(diag_fill[1:3], 16) < int(vert_fill[1:3], 16)

    def test_adjacent_tiles_share_edges(self):
        grid = BinGrid(UNIT, {
            AxialCoord(0, 0): BinAggregate(1.0),
            AxialCoord(1, 0): BinAggregate(1.0),
            AxialCoord(0, 1): BinAggregate(1.0),
        })
        svg = render_svg(grid, RenderSpec())
        polys = [vertex_list(points) for points, _ in polygons(svg)]
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                shared = sum(
                    1 for a in polys[i] for b in polys[j]
                    if math.hypot(a[0] - b[0], a[1] - b[1]) <= 0.01)
                assert shared == 2  # adjacent hexagons share one edge

    def test_value_floor_hides_bins(self):
        grid = BinGrid(UNIT, {
            AxialCoord(0, 0): BinAggregate(1.0),
            AxialCoord(1, 0): BinAggregate(0.05),
        })
        svg = render_svg(grid, RenderSpec(value_floor=0.1))
        assert len(polygons(svg)) == 1

    def test_anisotropic_layout_stretches_x(self):
        narrow = render_svg(single_bin_grid(), RenderSpec())
        layout = HexLayout(0, 0, 2.0, 1.0)
        wide = render_svg(BinGrid(layout, {AxialCoord(0, 0): BinAggregate(1.0)}),
                          RenderSpec())
        def width(svg):
            return float(re.search(r'width="([0-9.]+)"', svg).group(1))
        assert width(wide) == pytest.approx(2 * width(narrow) - 4.0 + 4.0, rel=0.1)
        assert width(wide) > width(narrow)

    def test_data_aspect_off_gives_regular_hexagons(self):
        layout = HexLayout(0, 0, 50.0, 1.0)
        grid = BinGrid(layout, {AxialCoord(0, 0): BinAggregate(1.0)})
        svg = render_svg(grid, RenderSpec(data_aspect=False))
        reference = render_svg(single_bin_grid(), RenderSpec())
        strip = lambda s: re.sub(r'fill="#[0-9a-f]{6}"', "", s)
        assert strip(svg) == strip(reference)

    def test_stroke_attributes_emitted(self):
        svg = render_svg(single_bin_grid(),
                         RenderSpec(stroke="#202020", stroke_width=0.5))
        assert 'stroke="#202020" stroke-width="0.500"' in svg

    def test_three_decimal_formatting(self):
        svg = render_svg(single_bin_grid(), RenderSpec())
        for points, _ in polygons(svg):
            for p in points:
                x, y = p.split(",")
                assert re.fullmatch(r"-?\d+\.\d{3}", x)
                assert re.fullmatch(r"-?\d+\.\d{3}", y)


class TestTileFill:
    def test_matches_manual_composition(self):
        spec = RenderSpec(colormap="viridis", saturation=2.0)
        t = normalize_value(1.0, 4.0, 2.0)
        assert tile_fill(1.0, 4.0, spec) == color_hex(colormap_rgb("viridis", t))
