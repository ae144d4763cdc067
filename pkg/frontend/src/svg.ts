// Hex tile SVG building. Mirrors the server-side renderer's pixel
// geometry (margins, y-flip, emission order, decimal formatting) so the
// two agree within half a pixel; the UI adds data-q/data-r attributes
// for hit testing but performs no lattice math beyond vertex placement.

import type { BinEntry, BinsResponse } from "./api.js";
import { tileFill, type ColormapName } from "./color.js";

const SQRT3 = Math.sqrt(3);

// flat-top hexagon corners (unit side) at angles 0, 60, ..., 300 degrees
const CORNERS: ReadonlyArray<readonly [number, number]> = [
  [1, 0],
  [0.5, SQRT3 / 2],
  [-0.5, SQRT3 / 2],
  [-1, 0],
  [-0.5, -SQRT3 / 2],
  [0.5, -SQRT3 / 2],
];

const MARGIN = 2;
const EMPTY_SIZE = 100;

export interface RenderOptions {
  colormap: ColormapName;
  saturation: number;
  tileSidePx: number;
  dataAspect: boolean;
  background: string;
  valueFloor: number;
}

export const DEFAULT_RENDER: RenderOptions = {
  colormap: "viridis",
  saturation: 1,
  tileSidePx: 14,
  dataAspect: false,
  background: "#ffffff",
  valueFloor: 0,
};

export interface Tile {
  q: number;
  r: number;
  value: number;
  fill: string;
  corners: Array<[number, number]>;
}

function sortedBins(bins: BinEntry[]): BinEntry[] {
  return [...bins].sort((a, b) => a.q - b.q || a.r - b.r);
}

/** Tile corner geometry + fills for a bins response, in (q, r) order. */
export function layoutTiles(response: BinsResponse, opts: RenderOptions): Tile[] {
  const { layout } = response;
  const aspect = opts.dataAspect ? layout.scale_x / layout.scale_y : 1;
  const side = opts.tileSidePx;
  const tiles: Tile[] = [];
  for (const bin of sortedBins(response.bins)) {
    if (bin.value < opts.valueFloor) continue;
    const u = (bin.cx - layout.origin_x) / layout.scale_x;
    const v = (bin.cy - layout.origin_y) / layout.scale_y;
    const corners = CORNERS.map(
      ([dx, dy]): [number, number] => [(u + dx) * aspect * side, -(v + dy) * side],
    );
    tiles.push({
      q: bin.q,
      r: bin.r,
      value: bin.value,
      fill: tileFill(bin.value, response.v_max, opts.colormap, opts.saturation),
      corners,
    });
  }
  if (tiles.length > 0) {
    let minX = Infinity;
    let minY = Infinity;
    for (const tile of tiles) {
      for (const [x, y] of tile.corners) {
        minX = Math.min(minX, x);
        minY = Math.min(minY, y);
      }
    }
    const tx = MARGIN - minX;
    const ty = MARGIN - minY;
    for (const tile of tiles) {
      tile.corners = tile.corners.map(([x, y]): [number, number] => [x + tx, y + ty]);
    }
  }
  return tiles;
}

function extent(tiles: Tile[]): [number, number] {
  if (tiles.length === 0) return [EMPTY_SIZE, EMPTY_SIZE];
  let maxX = 0;
  let maxY = 0;
  for (const tile of tiles) {
    for (const [x, y] of tile.corners) {
      maxX = Math.max(maxX, x);
      maxY = Math.max(maxY, y);
    }
  }
  return [maxX + MARGIN, maxY + MARGIN];
}

const fmt = (x: number) => x.toFixed(3);

/** Standalone SVG document for a bins response. */
export function buildSvg(response: BinsResponse, opts: RenderOptions): string {
  const tiles = layoutTiles(response, opts);
  const [width, height] = extent(tiles);
  const lines = [
    `<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="${fmt(width)}" ` +
      `height="${fmt(height)}" viewBox="0 0 ${fmt(width)} ${fmt(height)}">`,
    `<rect x="0" y="0" width="${fmt(width)}" height="${fmt(height)}" fill="${opts.background}"/>`,
  ];
  for (const tile of tiles) {
    const points = tile.corners.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    lines.push(
      `<polygon points="${points}" fill="${tile.fill}" data-q="${tile.q}" data-r="${tile.r}"/>`,
    );
  }
  lines.push("</svg>");
  return lines.join("\n");
}
