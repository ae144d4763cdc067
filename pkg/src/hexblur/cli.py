"""Command-line driver: bin CSV points, blur bin files, render SVG,
inspect stencils, and serve the HTTP API.

Exit codes: 0 success, 1 usage error, 2 data error.

Bins file format: ``#`` comment lines echoing the layout, then a CSV
header ``q,r,center_x,center_y,value``. Centers are informational (6
decimals, data units); values are written with full round-trip precision
so file-based pipelines match in-process results bit for bit.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from .binning import BinAggregate, BinGrid, CsvParseError, bin_points, read_csv, suggest_layout
from .blur import MODES, BlurParams, apply_blur, build_stencil, stencil_table
from .hexgrid import AxialCoord, HexLayout
from .render import COLORMAPS, RenderSpec, render_svg

USAGE_ERROR = 1
DATA_ERROR = 2

_BINS_MAGIC = "# hexblur-bins-v1"


class UsageError(Exception):
    """Bad flag combination detected after argparse."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; our contract reserves 2 for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _positive(name):
    def parse(text):
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number") from None
        if not (math.isfinite(v) and v > 0):
            raise argparse.ArgumentTypeError(f"{name} must be finite and > 0")
        return v
    return parse


def _epsilon(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("epsilon must be a number") from None
    if not (0.0 < v < 1.0):
        raise argparse.ArgumentTypeError("epsilon must be in (0, 1)")
    return v


def write_bins_file(grid: BinGrid, path: str):
    layout = grid.layout
    lines = [
        _BINS_MAGIC,
        f"# origin_x={layout.origin_x!r} origin_y={layout.origin_y!r} "
        f"scale_x={layout.scale_x!r} scale_y={layout.scale_y!r}",
        "q,r,center_x,center_y,value",
    ]
    for a, agg in grid.sorted_items():
        cx, cy = layout.bin_center_data(a)
        lines.append(f"{a.q},{a.r},{cx:.6f},{cy:.6f},{agg.total_weight!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_bins_file(path: str) -> BinGrid:
    """Reconstruct a grid from a bins file; labels are not persisted."""
    layout_kv = {}
    bins = {}
    with open(path, "r", encoding="utf-8") as fh:
        lineno = 0
        saw_header = False
        for raw in fh:
            lineno += 1
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                for token in line[1:].split():
                    if "=" in token:
                        key, _, val = token.partition("=")
                        layout_kv[key] = val
                continue
            if not saw_header:
                if line != "q,r,center_x,center_y,value":
                    raise CsvParseError(lineno, "not a hexblur bins file")
                saw_header = True
                continue
            fields = line.split(",")
            if len(fields) != 5:
                raise CsvParseError(lineno, f"expected 5 fields, got {len(fields)}")
            try:
                q, r = int(fields[0]), int(fields[1])
                value = float(fields[4])
            except ValueError as exc:
                raise CsvParseError(lineno, str(exc)) from None
            bins[AxialCoord(q, r)] = BinAggregate(value, {})
    try:
        layout = HexLayout(
            float(layout_kv.get("origin_x", 0.0)),
            float(layout_kv.get("origin_y", 0.0)),
            float(layout_kv.get("scale_x", 1.0)),
            float(layout_kv.get("scale_y", 1.0)),
        )
    except ValueError as exc:
        raise CsvParseError(0, f"bad layout header: {exc}") from None
    return BinGrid(layout, bins)


def _layout_from_args(args, dataset) -> HexLayout:
    if args.auto_bins is not None:
        if any(v is not None for v in (args.size_x, args.size_y, args.origin_x, args.origin_y)):
            raise UsageError("--auto-bins conflicts with explicit layout flags")
        if args.auto_bins < 1:
            raise UsageError("--auto-bins must be >= 1")
        if dataset.is_empty:
            return HexLayout()
        return suggest_layout(dataset, args.auto_bins)
    return HexLayout(
        args.origin_x if args.origin_x is not None else 0.0,
        args.origin_y if args.origin_y is not None else 0.0,
        args.size_x if args.size_x is not None else 1.0,
        args.size_y if args.size_y is not None else 1.0,
    )


def _add_layout_flags(p):
    p.add_argument("--origin-x", type=float, default=None, help="layout origin x (data units)")
    p.add_argument("--origin-y", type=float, default=None, help="layout origin y (data units)")
    p.add_argument("--size-x", type=_positive("--size-x"), default=None,
                   help="data units per hexagon side along x")
    p.add_argument("--size-y", type=_positive("--size-y"), default=None,
                   help="data units per hexagon side along y")
    p.add_argument("--auto-bins", type=int, default=None, metavar="N",
                   help="derive the layout from the data, about N bins across")


def _add_blur_flags(p, mode_default):
    p.add_argument("--sigma-x", type=_positive("--sigma-x"), default=None,
                   help="Gaussian sigma along x, in hexagon side lengths")
    p.add_argument("--sigma-y", type=_positive("--sigma-y"), default=None,
                   help="Gaussian sigma along y, in hexagon side lengths")
    p.add_argument("--sigma-x-data", type=_positive("--sigma-x-data"), default=None,
                   help="Gaussian sigma along x in data units (divided by the layout scale)")
    p.add_argument("--sigma-y-data", type=_positive("--sigma-y-data"), default=None,
                   help="Gaussian sigma along y in data units (divided by the layout scale)")
    p.add_argument("--epsilon", type=_epsilon, default=1e-3,
                   help="relative-weight truncation threshold (default 1e-3)")
    p.add_argument("--mode", choices=MODES, default=mode_default,
                   help=f"kernel normalization (default {mode_default})")


def _blur_params_from_args(args, layout: HexLayout | None) -> BlurParams:
    if (args.sigma_x_data is not None) or (args.sigma_y_data is not None):
        if args.sigma_x is not None or args.sigma_y is not None:
            raise UsageError("--sigma-*-data conflicts with --sigma-x/--sigma-y")
        if args.sigma_x_data is None or args.sigma_y_data is None:
            raise UsageError("--sigma-x-data and --sigma-y-data must be given together")
        if layout is None:
            raise UsageError("data-unit sigmas need a layout")
        return BlurParams(args.sigma_x_data / layout.scale_x,
                          args.sigma_y_data / layout.scale_y,
                          args.epsilon, args.mode)
    if args.sigma_x is None or args.sigma_y is None:
        raise UsageError("--sigma-x and --sigma-y are required")
    return BlurParams(args.sigma_x, args.sigma_y, args.epsilon, args.mode)


def _threads_from_env() -> int:
    try:
        return max(1, int(os.environ.get("HEXBLUR_THREADS", "1")))
    except ValueError:
        return 1


def run_bin(args) -> int:
    dataset, skipped = read_csv(args.input, permissive=args.permissive)
    layout = _layout_from_args(args, dataset)
    grid = bin_points(dataset, layout)
    write_bins_file(grid, args.output)
    msg = f"{len(dataset)} points -> {len(grid)} bins"
    if skipped:
        msg += f" ({len(skipped)} rows skipped)"
    print(msg, file=sys.stderr)
    return 0


def run_blur(args) -> int:
    grid = read_bins_file(args.input)
    params = _blur_params_from_args(args, grid.layout)
    stencil = build_stencil(params)
    blurred = apply_blur(grid, stencil, threads=_threads_from_env())
    write_bins_file(blurred, args.output)
    print(f"{len(grid)} bins -> {len(blurred)} bins "
          f"(stencil {len(stencil)} offsets)", file=sys.stderr)
    return 0


def run_render(args) -> int:
    grid = read_bins_file(args.input)
    spec = RenderSpec(
        colormap=args.colormap,
        saturation=args.saturation,
        tile_side_px=args.tile_px,
        stroke=args.stroke,
        stroke_width=args.stroke_width,
        background=args.background,
        value_floor=args.floor,
        data_aspect=not args.no_data_aspect,
    )
    svg = render_svg(grid, spec)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"rendered {len(grid)} bins", file=sys.stderr)
    return 0


def run_stencil(args) -> int:
    params = _blur_params_from_args(args, None)
    table = stencil_table(build_stencil(params))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(table)
    else:
        sys.stdout.write(table)
    return 0


def run_serve(args) -> int:
    import uvicorn

    from .service import DatasetStore, create_app

    store = DatasetStore(data_dir=args.data_dir)
    app = create_app(store, allow_origin=args.allow_origin, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="hexblur",
                     description="Hexagonal binning with anisotropic Gaussian blur")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_bin = sub.add_parser("bin", parents=[], help="aggregate CSV points into a bins file")
    p_bin.add_argument("input", help="CSV file: x,y[,weight[,label]]")
    p_bin.add_argument("-o", "--output", required=True, help="bins file to write")
    _add_layout_flags(p_bin)
    p_bin.add_argument("--permissive", action="store_true",
                       help="skip malformed rows instead of aborting")
    p_bin.set_defaults(func=run_bin)

    p_blur = sub.add_parser("blur", help="blur a bins file")
    p_blur.add_argument("input", help="bins file")
    p_blur.add_argument("-o", "--output", required=True, help="bins file to write")
    _add_blur_flags(p_blur, mode_default="mass_preserving")
    p_blur.set_defaults(func=run_blur)

    p_render = sub.add_parser("render", help="render a bins file to SVG")
    p_render.add_argument("input", help="bins file")
    p_render.add_argument("-o", "--output", required=True, help="SVG file to write")
    p_render.add_argument("--colormap", choices=COLORMAPS, default="grayscale")
    p_render.add_argument("--saturation", type=_positive("--saturation"), default=1.0,
                          help="display gain >= 1; values clip at full intensity")
    p_render.add_argument("--tile-px", type=_positive("--tile-px"), default=20.0,
                          help="hexagon side length in pixels")
    p_render.add_argument("--floor", type=float, default=0.0,
                          help="bins below this value are not drawn")
    p_render.add_argument("--stroke", default=None, help="tile outline color")
    p_render.add_argument("--stroke-width", type=_positive("--stroke-width"), default=1.0)
    p_render.add_argument("--background", default="#ffffff")
    p_render.add_argument("--no-data-aspect", action="store_true",
                          help="draw regular hexagons instead of data-space proportions")
    p_render.set_defaults(func=run_render)

    p_st = sub.add_parser("stencil", help="print a kernel stencil as a text table")
    _add_blur_flags(p_st, mode_default="center_relative")
    p_st.add_argument("-o", "--output", default=None, help="write to file instead of stdout")
    p_st.set_defaults(func=run_stencil)

    p_serve = sub.add_parser("serve", help="run the JSON HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8008)
    p_serve.add_argument("--data-dir", default=None,
                         help="persist uploaded CSVs here and reload them at startup")
    p_serve.add_argument("--allow-origin", default="*",
                         help="CORS origin allowed to call the API")
    p_serve.add_argument("--ui-dir", default=None,
                         help="serve this directory of static UI files at /")
    p_serve.set_defaults(func=run_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hexblur: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (CsvParseError, ValueError) as exc:
        print(f"hexblur: error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except OSError as exc:
        print(f"hexblur: error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
