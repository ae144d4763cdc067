#!/usr/bin/env python3
"""Regenerate the bundled demo: a synthetic bimodal point cloud (two
molecule families in mass / log P style axes) plus before/after blur SVGs
under docs/. Deterministic; run from the repository root."""

import pathlib

import numpy as np

from hexblur.binning import bin_points, parse_csv, suggest_layout
from hexblur.blur import BlurParams, apply_blur, build_stencil
from hexblur.render import RenderSpec, render_svg

DOCS = pathlib.Path(__file__).resolve().parent.parent / "docs"


def make_points():
    rng = np.random.default_rng(2024)
    small = np.column_stack([
        rng.normal(160.0, 35.0, 2600),
        rng.normal(-1.2, 0.9, 2600),
    ])
    large = np.column_stack([
        rng.normal(430.0, 60.0, 1800),
        rng.normal(2.8, 1.1, 1800),
    ])
    rows = []
    for x, y in small:
        rows.append(f"{x:.4f},{y:.4f},1,small-polar")
    for x, y in large:
        rows.append(f"{x:.4f},{y:.4f},1,large-apolar")
    return "x,y,weight,label\n" + "\n".join(rows) + "\n"


def main():
    DOCS.mkdir(exist_ok=True)
    csv_text = make_points()
    (DOCS / "demo_bimodal.csv").write_text(csv_text)

    dataset, _ = parse_csv(csv_text)
    layout = suggest_layout(dataset, 24)
    grid = bin_points(dataset, layout)
    spec = RenderSpec(colormap="viridis", saturation=2.5, tile_side_px=12.0,
                      data_aspect=False)
    (DOCS / "demo_raw.svg").write_text(render_svg(grid, spec))

    stencil = build_stencil(BlurParams(2.5, 1.25, 1e-3, "mass_preserving"))
    blurred = apply_blur(grid, stencil)
    (DOCS / "demo_blurred.svg").write_text(render_svg(blurred, spec))
    print(f"wrote {len(dataset)} points, {len(grid)} raw bins, "
          f"{len(blurred)} blurred bins to {DOCS}")


if __name__ == "__main__":
    main()
