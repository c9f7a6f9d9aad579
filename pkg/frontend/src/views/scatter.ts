/** Correlation scatter for a device pair: hourly counts joined on equal
 * timestamps, annotated with the server-computed Pearson r (from the
 * correlation matrix); the console never computes r itself. */

import type { CorrelationDoc, ReadingDoc } from "../types.js";

export interface ScatterPoint {
  x: number;
  y: number;
  timestamp: string;
}

export interface ScatterModel {
  points: ScatterPoint[];
  r: number | null;
  deviceA: string;
  deviceB: string;
  maxX: number;
  maxY: number;
  displayed: number[];
}

export function pairCorrelation(
  matrix: CorrelationDoc,
  deviceA: string,
  deviceB: string,
): number | null {
  const i = matrix.devices.indexOf(deviceA);
  const j = matrix.devices.indexOf(deviceB);
  if (i < 0 || j < 0) {
    return null;
  }
  return matrix.matrix[i][j];
}

export function buildScatterModel(
  readingsA: ReadingDoc[],
  readingsB: ReadingDoc[],
  correlation: CorrelationDoc,
): ScatterModel {
  const byTimestamp = new Map(readingsB.map((r) => [r.timestamp, r]));
  const points: ScatterPoint[] = [];
  for (const a of readingsA) {
    const b = byTimestamp.get(a.timestamp);
    if (b) {
      points.push({ x: a.counts, y: b.counts, timestamp: a.timestamp });
    }
  }
  const deviceA = readingsA[0]?.device ?? "";
  const deviceB = readingsB[0]?.device ?? "";
  const r = pairCorrelation(correlation, deviceA, deviceB);
  const maxX = points.reduce((best, p) => Math.max(best, p.x), 0);
  const maxY = points.reduce((best, p) => Math.max(best, p.y), 0);
  return {
    points,
    r,
    deviceA,
    deviceB,
    maxX,
    maxY,
    // the r badge plus axis extents; point coords are API counts themselves
    displayed: [...(r === null ? [] : [r]), maxX, maxY],
  };
}
