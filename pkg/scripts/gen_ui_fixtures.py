#!/usr/bin/env python3
"""Regenerate the frontend test fixtures from the primary implementation.

The UI must reproduce the server-side colors (within 1/255 per channel)
and tile geometry (within 0.5 px), so its tests compare against values
computed here. Run from the repository root after changing render code.
"""

import json
import pathlib
import re

from hexblur.binning import bin_points, parse_csv
from hexblur.blur import BlurParams, apply_blur, build_stencil
from hexblur.hexgrid import HexLayout
from hexblur.render import RenderSpec, render_svg, tile_fill
from hexblur.service import _bins_payload

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "frontend" / "test" / "fixtures"

POLYGON_RE = re.compile(r'<polygon points="([^"]+)"')


def color_cases():
    cases = []
    for colormap in ("grayscale", "viridis"):
        for saturation in (1.0, 2.5, 10.0):
            for frac in (0.0, 0.05, 0.1, 0.2, 0.25, 0.4, 0.5, 0.75, 0.9, 1.0):
                spec = RenderSpec(colormap=colormap, saturation=saturation)
                cases.append({
                    "value": frac * 7.0,
                    "vMax": 7.0,
                    "saturation": saturation,
                    "colormap": colormap,
                    "fill": tile_fill(frac * 7.0, 7.0, spec),
                })
    cases.append({"value": 1.0, "vMax": 0.0, "saturation": 1.0,
                  "colormap": "grayscale",
                  "fill": tile_fill(1.0, 0.0, RenderSpec())})
    return cases


def bins_fixture():
    csv_text = "0,0,3,alkaloid\n0.2,0.1,1,terpene\n1.6,-0.9,2,alkaloid\n-1.4,0.8,1,lipid\n"
    dataset, _ = parse_csv(csv_text)
    layout = HexLayout(0.0, 0.0, 1.0, 1.0)
    grid = apply_blur(bin_points(dataset, layout),
                      build_stencil(BlurParams(2.0, 1.0, 1e-3, "center_relative")))
    payload = _bins_payload(grid, {"sigma_x": 2.0, "sigma_y": 1.0,
                                   "epsilon": 1e-3, "mode": "center_relative"})
    spec = RenderSpec(colormap="viridis", saturation=2.5, tile_side_px=14.0,
                      data_aspect=False)
    svg = render_svg(grid, spec)
    polygons = [
        [[float(v) for v in pt.split(",")] for pt in points.split(" ")]
        for points in POLYGON_RE.findall(svg)
    ]
    expected = []
    for (a, agg), corners in zip(grid.sorted_items(), polygons):
        expected.append({
            "q": a.q,
            "r": a.r,
            "fill": tile_fill(agg.total_weight, grid.max_value(), spec),
            "corners": corners,
        })
    return {
        "response": payload,
        "render": {"colormap": "viridis", "saturation": 2.5,
                   "tileSidePx": 14.0, "dataAspect": False},
        "expectedTiles": expected,
    }


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    (FIXTURES / "colors.json").write_text(
        json.dumps(color_cases(), indent=1) + "\n")
    (FIXTURES / "bins.json").write_text(
        json.dumps(bins_fixture(), indent=1) + "\n")
    print(f"wrote fixtures to {FIXTURES}")


if __name__ == "__main__":
    main()
