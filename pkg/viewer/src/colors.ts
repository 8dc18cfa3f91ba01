/**
 * The viewer never re-derives colors from RSSI: document color values
 * pass through verbatim to the renderer.
 */

import type { ColorRGB } from "./types";

export function colorToHex(color: ColorRGB): number {
  return (color[0] << 16) | (color[1] << 8) | color[2];
}

export function colorToCss(color: ColorRGB): string {
  return `rgb(${color[0]}, ${color[1]}, ${color[2]})`;
}
