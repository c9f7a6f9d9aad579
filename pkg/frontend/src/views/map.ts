/** Fleet map: trap markers plus a count-weighted heat overlay, drawn in a
 * user-chosen bounding box. The view model carries pixel geometry only;
 * `displayed` lists every number the user actually reads off the view. */

import type { BBoxValue, HeatPointDoc, LocationsDoc } from "../types.js";

export interface MapMarker {
  x: number;
  y: number;
  devices: string[];
}

export interface HeatBlob {
  x: number;
  y: number;
  radius: number;
  alpha: number;
  weight: number;
}

export interface MapModel {
  markers: MapMarker[];
  heat: HeatBlob[];
  locationCount: number;
  displayed: number[];
}

export type Project = (lat: number, long: number) => { x: number; y: number };

export function projector(bbox: BBoxValue, width: number, height: number): Project {
  const latSpan = bbox.latMax - bbox.latMin || 1;
  const longSpan = bbox.longMax - bbox.longMin || 1;
  return (lat, long) => ({
    x: ((long - bbox.longMin) / longSpan) * width,
    y: height - ((lat - bbox.latMin) / latSpan) * height, // north up
  });
}

export function buildMapModel(
  locations: LocationsDoc,
  heatPoints: HeatPointDoc[],
  bbox: BBoxValue,
  width: number,
  height: number,
): MapModel {
  const project = projector(bbox, width, height);
  const markers = locations.locations.map(({ point, devices }) => ({
    ...project(point.lat, point.long),
    devices,
  }));
  const maxWeight = heatPoints.reduce((best, p) => Math.max(best, p.weight), 0);
  const heat = heatPoints.map(({ point, weight }) => {
    const t = maxWeight > 0 ? weight / maxWeight : 0;
    return {
      ...project(point.lat, point.long),
      radius: 8 + 24 * t,
      alpha: 0.15 + 0.55 * t,
      weight,
    };
  });
  return {
    markers,
    heat,
    locationCount: locations.count,
    // the count badge and each blob's weight tooltip are the visible numbers
    displayed: [locations.count, ...heatPoints.map((p) => p.weight)],
  };
}

/** Convert a drag rectangle (canvas pixels) back to a bbox query value. */
export function dragToBBox(
  bbox: BBoxValue,
  width: number,
  height: number,
  x0: number,
  y0: number,
  x1: number,
  y1: number,
): BBoxValue {
  const longAt = (x: number) => bbox.longMin + (x / width) * (bbox.longMax - bbox.longMin);
  const latAt = (y: number) => bbox.latMin + ((height - y) / height) * (bbox.latMax - bbox.latMin);
  return {
    latMin: Math.min(latAt(y0), latAt(y1)),
    latMax: Math.max(latAt(y0), latAt(y1)),
    longMin: Math.min(longAt(x0), longAt(x1)),
    longMax: Math.max(longAt(x0), longAt(x1)),
  };
}

export function formatBBox(b: BBoxValue): string {
  return [b.latMin, b.latMax, b.longMin, b.longMax].map((v) => v.toFixed(5)).join(",");
}
