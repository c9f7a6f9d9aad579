/** Color scales. Temperature and humidity heatmaps use fixed ranges
 * (0-60 degC, 0-100 %RH) so screenshots are comparable across datasets;
 * counts derive their range from the matrix's scale hint. */

export interface Scale {
  min: number;
  max: number;
}

export const TEMPERATURE_SCALE: Scale = { min: 0, max: 60 };
export const HUMIDITY_SCALE: Scale = { min: 0, max: 100 };

// compact viridis-like ramp, dark-to-bright
const RAMP: [number, number, number][] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

export function clamp01(t: number): number {
  return t < 0 ? 0 : t > 1 ? 1 : t;
}

export function colorFor(value: number, scale: Scale): string {
  const span = scale.max - scale.min;
  const t = clamp01(span === 0 ? 0 : (value - scale.min) / span);
  const pos = t * (RAMP.length - 1);
  const i = Math.min(Math.floor(pos), RAMP.length - 2);
  const frac = pos - i;
  const [r1, g1, b1] = RAMP[i];
  const [r2, g2, b2] = RAMP[i + 1];
  const mix = (a: number, b: number) => Math.round(a + (b - a) * frac);
  return `rgb(${mix(r1, r2)},${mix(g1, g2)},${mix(b1, b2)})`;
}

export function scaleForMetric(
  metric: "counts" | "temperature" | "humidity",
  hint: [number, number] | null,
): Scale {
  if (metric === "temperature") {
    return TEMPERATURE_SCALE;
  }
  if (metric === "humidity") {
    return HUMIDITY_SCALE;
  }
  return hint ? { min: hint[0], max: hint[1] } : { min: 0, max: 1 };
}

export function colorbarTicks(scale: Scale, n = 5): number[] {
  const ticks: number[] = [];
  for (let i = 0; i < n; i++) {
    ticks.push(scale.min + ((scale.max - scale.min) * i) / (n - 1));
  }
  return ticks;
}
