/** Circadian heatmap: 24 x D matrix cells -> colored rectangles with the
 * metric-appropriate fixed color scale and a colorbar. */

import { colorFor, colorbarTicks, scaleForMetric, type Scale } from "../scales.js";
import type { HeatmapDoc } from "../types.js";

export interface HeatCell {
  hour: number;
  dayIndex: number;
  value: number;
  color: string;
}

export interface CircadianModel {
  cells: HeatCell[];
  days: string[];
  hours: number[];
  scale: Scale;
  colorbar: { value: number; color: string }[];
  metric: HeatmapDoc["metric"];
  displayed: number[];
}

export function buildCircadianModel(doc: HeatmapDoc): CircadianModel {
  const scale = scaleForMetric(doc.metric, doc.scale_hint);
  const cells: HeatCell[] = [];
  for (const hour of doc.rows) {
    const row = doc.cells[hour];
    for (let day = 0; day < doc.cols.length; day++) {
      const value = row[day];
      if (value === null) {
        continue; // missing cells stay background-colored
      }
      cells.push({ hour, dayIndex: day, value, color: colorFor(value, scale) });
    }
  }
  const colorbar = colorbarTicks(scale).map((value) => ({
    value,
    color: colorFor(value, scale),
  }));
  return {
    cells,
    days: doc.cols,
    hours: doc.rows,
    scale,
    colorbar,
    metric: doc.metric,
    // hover tooltips show cell values; the colorbar shows the scale ends
    displayed: [...cells.map((c) => c.value), scale.min, scale.max],
  };
}
