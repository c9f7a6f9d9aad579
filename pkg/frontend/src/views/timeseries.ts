/** Per-device count series with outlier markers. Points plot the hourly
 * readings exactly as returned; outlier events attach to their timestamps.
 * No aggregation happens here: every y value is an API number. */

import type { OutlierDoc, ReadingDoc } from "../types.js";

export interface SeriesPoint {
  x: number; // fraction of the time span [0, 1]
  y: number; // fraction of the count range [0, 1]
  timestamp: string;
  counts: number;
}

export interface OutlierMark extends SeriesPoint {
  zScore: number;
}

export interface TimeSeriesModel {
  points: SeriesPoint[];
  outliers: OutlierMark[];
  maxCounts: number;
  device: string;
  displayed: number[];
}

export function buildTimeSeriesModel(
  readings: ReadingDoc[],
  outliers: OutlierDoc[],
): TimeSeriesModel {
  if (readings.length === 0) {
    return { points: [], outliers: [], maxCounts: 0, device: "", displayed: [] };
  }
  const times = readings.map((r) => Date.parse(r.timestamp));
  const t0 = Math.min(...times);
  const t1 = Math.max(...times);
  const span = t1 - t0 || 1;
  const maxCounts = readings.reduce((best, r) => Math.max(best, r.counts), 0) || 1;

  const toPoint = (timestamp: string, counts: number): SeriesPoint => ({
    x: (Date.parse(timestamp) - t0) / span,
    y: counts / maxCounts,
    timestamp,
    counts,
  });

  const points = readings.map((r) => toPoint(r.timestamp, r.counts));
  const marks = outliers.map((event) => ({
    ...toPoint(event.timestamp, event.counts),
    zScore: event.z_score,
  }));
  return {
    points,
    outliers: marks,
    maxCounts,
    device: readings[0].device,
    // axis max, each outlier's count and z-score label
    displayed: [maxCounts, ...outliers.flatMap((e) => [e.counts, e.z_score])],
  };
}
