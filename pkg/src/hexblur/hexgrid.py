"""Flat-top hexagonal lattice geometry.

All lengths are in *normalized units*: the hexagon side length is 1, so
adjacent bin centers are sqrt(3) apart, columns are spaced 3/2 apart in x
and consecutive columns are offset sqrt(3)/2 in y. Two integer addressing
schemes are supported: axial (trapezoidal) coordinates ``(q, r)`` whose
Cartesian transform is parity-free, and offset coordinates ``(col, row)``
where odd columns are shifted up by sqrt(3)/2. ``HexLayout`` maps real
data-space coordinates (with independent per-axis units) onto the
normalized lattice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

SQRT3 = math.sqrt(3.0)

#: Center-to-edge distance (apothem) of a regular hexagon divided by the
#: half-side of the square of equal area: sqrt(2/sqrt(3)) ~ 1.0746. The
#: minimum center-to-border distance is ~7.5% longer in a hexagonal bin
#: than in an equiareal square bin, which makes interactive bin picking
#: more forgiving.
EQUIAREAL_SQUARE_APOTHEM_RATIO = math.sqrt(2.0 / SQRT3)

#: Axial steps to the six ring-1 neighbors, in counterclockwise Cartesian
#: order starting from +x.
AXIAL_DIRECTIONS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))


class AxialCoord(NamedTuple):
    """Axial (trapezoidal) address of a hexagonal bin."""

    q: int
    r: int

    @property
    def s(self) -> int:
        """Implicit third cube coordinate; q + r + s = 0 always."""
        return -self.q - self.r

    def __add__(self, other):  # type: ignore[override]
        return AxialCoord(self.q + other[0], self.r + other[1])

    def __sub__(self, other):  # type: ignore[override]
        return AxialCoord(self.q - other[0], self.r - other[1])


class OffsetCoord(NamedTuple):
    """Offset address: column plus row, odd columns shifted up a half-row."""

    col: int
    row: int


class CartesianPoint(NamedTuple):
    """A point in normalized units (hexagon side lengths)."""

    x: float
    y: float


@dataclass(frozen=True)
class HexLayout:
    """Affine map between data space and the normalized lattice.

    ``scale_x``/``scale_y`` are the data units spanned by one hexagon side
    along each axis, so the two physical dimensions (say mass in Da and
    log P) can share one lattice with independent resolutions.
    """

    origin_x: float = 0.0
    origin_y: float = 0.0
    scale_x: float = 1.0
    scale_y: float = 1.0

    def __post_init__(self):
        for name in ("origin_x", "origin_y", "scale_x", "scale_y"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.scale_x <= 0 or self.scale_y <= 0:
            raise ValueError("scale_x and scale_y must be > 0")

    def to_normalized(self, x: float, y: float) -> CartesianPoint:
        return CartesianPoint((x - self.origin_x) / self.scale_x,
                              (y - self.origin_y) / self.scale_y)

    def to_data(self, u: float, v: float) -> tuple[float, float]:
        return (self.origin_x + u * self.scale_x,
                self.origin_y + v * self.scale_y)

    def bin_center_data(self, a: AxialCoord) -> tuple[float, float]:
        """Center of bin *a* in data units."""
        c = axial_to_cartesian(a)
        return self.to_data(c.x, c.y)


def axial_to_cartesian(a: AxialCoord) -> CartesianPoint:
    """Center of an axial bin: x = 3q/2, y = -sqrt(3)(q/2 + r)."""
    q, r = a
    return CartesianPoint(1.5 * q, -SQRT3 * (0.5 * q + r))


def offset_to_cartesian(o: OffsetCoord) -> CartesianPoint:
    """Center of an offset bin; odd columns sit sqrt(3)/2 higher."""
    col, row = o
    y = SQRT3 * row
    if col & 1:
        y += SQRT3 / 2.0
    return CartesianPoint(1.5 * col, y)


def axial_to_offset(a: AxialCoord) -> OffsetCoord:
    """Axial to offset, consistent with the two Cartesian transforms."""
    q, r = a
    return OffsetCoord(q, -((q + (q & 1)) // 2) - r)


def offset_to_axial(o: OffsetCoord) -> AxialCoord:
    """Inverse of :func:`axial_to_offset`."""
    col, row = o
    return AxialCoord(col, -row - (col + (col & 1)) // 2)


def fractional_axial(x: float, y: float) -> tuple[float, float]:
    """Invert the axial transform without rounding."""
    q = x * (2.0 / 3.0)
    r = x * (-1.0 / 3.0) + y * (-1.0 / SQRT3)
    return q, r


def cube_round(qf: float, rf: float) -> AxialCoord:
    """Round fractional axial coordinates to the containing bin.

    Rounds each cube component to the nearest integer (ties to even, the
    IEEE default) and repairs the component with the largest rounding
    error so q + r + s = 0 holds; error ties repair q, then r, then s.
    """
    sf = -qf - rf
    rq = round(qf)
    rr = round(rf)
    rs = round(sf)
    dq = abs(rq - qf)
    dr = abs(rr - rf)
    ds = abs(rs - sf)
    if dq >= dr and dq >= ds:
        rq = -rr - rs
    elif dr >= ds:
        rr = -rq - rs
    return AxialCoord(rq, rr)


def cartesian_to_axial(p: CartesianPoint | tuple[float, float]) -> AxialCoord:
    """Bin whose center is nearest to *p* (normalized units).

    The Voronoi cell of a hexagonal lattice center is the hexagon itself,
    so this is also point-in-hexagon assignment.
    """
    x, y = p
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError("cartesian_to_axial requires finite coordinates")
    return cube_round(*fractional_axial(x, y))


def hex_distance(a: AxialCoord, b: AxialCoord) -> int:
    """Minimum number of edge-crossing steps between two bins."""
    dq = a[0] - b[0]
    dr = a[1] - b[1]
    return (abs(dq) + abs(dr) + abs(dq + dr)) // 2


def ring(n: int) -> list[AxialCoord]:
    """All bins at hex distance *n* from the origin; 6n of them for n >= 1."""
    if n < 0:
        raise ValueError("ring index must be >= 0")
    if n == 0:
        return [AxialCoord(0, 0)]
    out = []
    cur = AxialCoord(AXIAL_DIRECTIONS[4][0] * n, AXIAL_DIRECTIONS[4][1] * n)
    for direction in AXIAL_DIRECTIONS:
        for _ in range(n):
            out.append(cur)
            cur = cur + direction
    return out


def neighbors(a: AxialCoord) -> list[AxialCoord]:
    """The six bins adjacent to *a*."""
    return [a + d for d in AXIAL_DIRECTIONS]
