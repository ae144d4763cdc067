"""Deterministic SVG rendering of a bin grid as a flat-top hexagonal
heatmap.

Output is byte-stable: bins are emitted in sorted (q, r) order and every
number is formatted with three decimals. Data-space anisotropy is made
visible by stretching x with the layout scale ratio, so hexagons are
regular only when scale_x == scale_y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._viridis_data import VIRIDIS_TABLE
from .binning import BinGrid
from .hexgrid import SQRT3, axial_to_cartesian

COLORMAPS = ("grayscale", "viridis")

# Flat-top hexagon corners (unit side), at angles 0, 60, ..., 300 degrees.
_CORNERS = (
    (1.0, 0.0),
    (0.5, SQRT3 / 2.0),
    (-0.5, SQRT3 / 2.0),
    (-1.0, 0.0),
    (-0.5, -SQRT3 / 2.0),
    (0.5, -SQRT3 / 2.0),
)

_EMPTY_SIZE = 100.0
_MARGIN = 2.0


@dataclass(frozen=True)
class RenderSpec:
    """Colormap, display gain, and geometry options for SVG emission.

    With ``data_aspect`` (the default), x is stretched by the layout scale
    ratio so tiles keep their data-space proportions; that only makes
    sense when both axes share a unit. Disable it for cross-unit plots
    (mass vs log P) to get regular hexagons.
    """

    colormap: str = "grayscale"
    saturation: float = 1.0
    tile_side_px: float = 20.0
    stroke: str | None = None
    stroke_width: float = 1.0
    background: str = "#ffffff"
    value_floor: float = 0.0
    data_aspect: bool = True

    def __post_init__(self):
        if self.colormap not in COLORMAPS:
            raise ValueError(f"colormap must be one of {COLORMAPS}")
        if not (math.isfinite(self.saturation) and self.saturation >= 1.0):
            raise ValueError("saturation must be >= 1")
        if not (math.isfinite(self.tile_side_px) and self.tile_side_px > 0):
            raise ValueError("tile_side_px must be > 0")
        if not (math.isfinite(self.value_floor) and self.value_floor >= 0):
            raise ValueError("value_floor must be >= 0")
        if self.stroke_width <= 0:
            raise ValueError("stroke_width must be > 0")


def normalize_value(v: float, v_max: float, saturation: float) -> float:
    """Linear display scaling with gain: min(saturation * v / v_max, 1).

    saturation 1 is the plain linear ramp; larger gains clip bright bins
    at full intensity so faint structure stays visible.
    """
    if v_max <= 0.0:
        return 0.0
    return min(saturation * v / v_max, 1.0)


def grayscale_rgb(t: float) -> tuple[int, int, int]:
    """Linear from white at 0 to black at 1."""
    c = round(255.0 * (1.0 - t))
    return (c, c, c)


def viridis_rgb(t: float) -> tuple[int, int, int]:
    """Viridis via the embedded 256-entry table with linear interpolation."""
    x = t * 255.0
    i = int(x)
    if i >= 255:
        r, g, b = VIRIDIS_TABLE[255]
    else:
        f = x - i
        r0, g0, b0 = VIRIDIS_TABLE[i]
        r1, g1, b1 = VIRIDIS_TABLE[i + 1]
        r = r0 + (r1 - r0) * f
        g = g0 + (g1 - g0) * f
        b = b0 + (b1 - b0) * f
    return (round(255.0 * r), round(255.0 * g), round(255.0 * b))


def colormap_rgb(name: str, t: float) -> tuple[int, int, int]:
    if name == "grayscale":
        return grayscale_rgb(t)
    if name == "viridis":
        return viridis_rgb(t)
    raise ValueError(f"colormap must be one of {COLORMAPS}")


def color_hex(rgb: tuple[int, int, int]) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def tile_fill(value: float, v_max: float, spec: RenderSpec) -> str:
    """Fill color for one bin value; shared by SVG output and the API."""
    t = normalize_value(value, v_max, spec.saturation)
    return color_hex(colormap_rgb(spec.colormap, t))


def _tile_corners_px(u: float, v: float, aspect: float, side_px: float):
    """Pixel corners for a tile centered at normalized (u, v); y flips so
    data y grows upward."""
    pts = []
    for cx, cy in _CORNERS:
        pts.append(((u + cx) * aspect * side_px, -(v + cy) * side_px))
    return pts


def render_svg(grid: BinGrid, spec: RenderSpec) -> str:
    """Render one flat-top hexagon per stored bin at or above the value
    floor; identical inputs yield byte-identical SVG."""
    aspect = grid.layout.scale_x / grid.layout.scale_y if spec.data_aspect else 1.0
    drawn = []
    v_max = grid.max_value()
    for a, agg in grid.sorted_items():
        if agg.total_weight < spec.value_floor:
            continue
        c = axial_to_cartesian(a)
        corners = _tile_corners_px(c.x, c.y, aspect, spec.tile_side_px)
        drawn.append((corners, agg.total_weight))

    if drawn:
        xs = [x for corners, _ in drawn for x, _ in corners]
        ys = [y for corners, _ in drawn for _, y in corners]
        tx = _MARGIN - min(xs)
        ty = _MARGIN - min(ys)
        width = (max(xs) - min(xs)) + 2 * _MARGIN
        height = (max(ys) - min(ys)) + 2 * _MARGIN
    else:
        tx = ty = 0.0
        width = height = _EMPTY_SIZE

    stroke_attr = ""
    if spec.stroke is not None:
        stroke_attr = f' stroke="{spec.stroke}" stroke-width="{spec.stroke_width:.3f}"'

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width:.3f}" height="{height:.3f}" '
        f'viewBox="0 0 {width:.3f} {height:.3f}">',
        f'<rect x="0" y="0" width="{width:.3f}" height="{height:.3f}" '
        f'fill="{spec.background}"/>',
    ]
    for corners, value in drawn:
        points = " ".join(f"{x + tx:.3f},{y + ty:.3f}" for x, y in corners)
        fill = tile_fill(value, v_max, spec)
        lines.append(f'<polygon points="{points}" fill="{fill}"{stroke_attr}/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
