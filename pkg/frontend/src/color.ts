/**
 * Class colors: a sequential single-hue blue ramp (colorblind-safe),
 * keyed by class_index so the coarse and fine views of the same layer
 * stay visually comparable. Zero-school zones get a neutral hatch
 * instead of a ramp color.
 */

// Light → dark; interpolated when k differs from the anchor count.
const RAMP_ANCHORS = [
  [239, 243, 255],
  [189, 215, 231],
  [107, 174, 214],
  [49, 130, 189],
  [8, 81, 156],
];

export const NEUTRAL_FILL = "#d9d9d9";
export const HATCH_PATTERN_ID = "zero-school-hatch";

function lerp(a: number, b: number, t: number): number {
  return a + (b - a) * t;
}

/** Fill color for class `index` out of `k` classes. */
export function classColor(index: number, k: number): string {
  if (k <= 1) return rgb(RAMP_ANCHORS[RAMP_ANCHORS.length - 1]!);
  const t = index / (k - 1);
  const pos = t * (RAMP_ANCHORS.length - 1);
  const lo = Math.min(Math.floor(pos), RAMP_ANCHORS.length - 2);
  const frac = pos - lo;
  const a = RAMP_ANCHORS[lo]!;
  const b = RAMP_ANCHORS[lo + 1]!;
  return rgb([
    Math.round(lerp(a[0]!, b[0]!, frac)),
    Math.round(lerp(a[1]!, b[1]!, frac)),
    Math.round(lerp(a[2]!, b[2]!, frac)),
  ]);
}

function rgb(c: number[]): string {
  return `rgb(${c[0]}, ${c[1]}, ${c[2]})`;
}
