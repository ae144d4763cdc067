"""hexblur: hexagonal binning of 2-D scatter data with anisotropic
Gaussian blur evaluated in Cartesian coordinates at bin centers."""

from ._backend import BACKEND_NAME
from .binning import (
    BinAggregate,
    BinGrid,
    CsvParseError,
    DataPoint,
    Dataset,
    bin_points,
    parse_csv,
    read_csv,
    suggest_layout,
    top_labels,
)
from .blur import (
    BlurParams,
    KernelStencil,
    apply_blur,
    build_stencil,
    gaussian_weight,
    stencil_table,
)
from .hexgrid import (
    EQUIAREAL_SQUARE_APOTHEM_RATIO,
    SQRT3,
    AxialCoord,
    CartesianPoint,
    HexLayout,
    OffsetCoord,
    axial_to_cartesian,
    axial_to_offset,
    cartesian_to_axial,
    hex_distance,
    offset_to_axial,
    offset_to_cartesian,
    ring,
)
from .render import RenderSpec, normalize_value, render_svg, tile_fill

__version__ = "0.1.0"

__all__ = [
    "AxialCoord", "OffsetCoord", "CartesianPoint", "HexLayout",
    "axial_to_cartesian", "offset_to_cartesian", "axial_to_offset",
    "offset_to_axial", "cartesian_to_axial", "ring", "hex_distance",
    "SQRT3", "EQUIAREAL_SQUARE_APOTHEM_RATIO",
    "DataPoint", "Dataset", "BinAggregate", "BinGrid", "CsvParseError",
    "parse_csv", "read_csv", "bin_points", "suggest_layout", "top_labels",
    "BlurParams", "KernelStencil", "gaussian_weight", "build_stencil",
    "apply_blur", "stencil_table",
    "RenderSpec", "normalize_value", "render_svg", "tile_fill",
    "BACKEND_NAME", "__version__",
]
