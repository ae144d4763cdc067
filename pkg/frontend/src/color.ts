// Color math mirroring the server-side renderer: the same normalize ->
// colormap -> hex pipeline, so tile fills match within 1/255 per channel.

import { VIRIDIS_TABLE } from "./viridis_data.js";

export type Rgb = readonly [number, number, number];

/** Linear display scaling with gain: min(saturation * v / vMax, 1). */
export function normalizeValue(v: number, vMax: number, saturation: number): number {
  if (vMax <= 0) return 0;
  return Math.min((saturation * v) / vMax, 1);
}

/** Linear from white at 0 to black at 1. */
export function grayscaleRgb(t: number): Rgb {
  const c = Math.round(255 * (1 - t));
  return [c, c, c];
}

/** Viridis via the embedded 256-entry table with linear interpolation. */
export function viridisRgb(t: number): Rgb {
  const x = t * 255;
  const i = Math.floor(x);
  if (i >= 255) {
    const [r, g, b] = VIRIDIS_TABLE[255];
    return [Math.round(255 * r), Math.round(255 * g), Math.round(255 * b)];
  }
  const f = x - i;
  const [r0, g0, b0] = VIRIDIS_TABLE[i];
  const [r1, g1, b1] = VIRIDIS_TABLE[i + 1];
  return [
    Math.round(255 * (r0 + (r1 - r0) * f)),
    Math.round(255 * (g0 + (g1 - g0) * f)),
    Math.round(255 * (b0 + (b1 - b0) * f)),
  ];
}

export type ColormapName = "grayscale" | "viridis";

export function colormapRgb(name: ColormapName, t: number): Rgb {
  return name === "grayscale" ? grayscaleRgb(t) : viridisRgb(t);
}

export function colorHex([r, g, b]: Rgb): string {
  const hx = (c: number) => c.toString(16).padStart(2, "0");
  return `#${hx(r)}${hx(g)}${hx(b)}`;
}

export function tileFill(
  value: number,
  vMax: number,
  colormap: ColormapName,
  saturation: number,
): string {
  return colorHex(colormapRgb(colormap, normalizeValue(value, vMax, saturation)));
}

export function hexToRgb(hex: string): Rgb {
  return [
    parseInt(hex.slice(1, 3), 16),
    parseInt(hex.slice(3, 5), 16),
    parseInt(hex.slice(5, 7), 16),
  ];
}
