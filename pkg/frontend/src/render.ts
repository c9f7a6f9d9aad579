/** Canvas renderers for the view models. Everything here turns already-built
 * models into pixels; no data math. */

import type { CircadianModel } from "./views/circadian.js";
import type { MapModel } from "./views/map.js";
import type { PsdModel, SpectrogramModel, WaveformModel } from "./views/recording.js";
import type { ScatterModel } from "./views/scatter.js";
import type { TimeSeriesModel } from "./views/timeseries.js";

function ctx2d(canvas: HTMLCanvasElement): CanvasRenderingContext2D {
  const ctx = canvas.getContext("2d");
  if (!ctx) {
    throw new Error("2d canvas unsupported");
  }
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

export function drawMap(canvas: HTMLCanvasElement, model: MapModel): void {
  const ctx = ctx2d(canvas);
  ctx.fillStyle = "#10212f";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  for (const blob of model.heat) {
    const gradient = ctx.createRadialGradient(blob.x, blob.y, 0, blob.x, blob.y, blob.radius);
    gradient.addColorStop(0, `rgba(255,96,64,${blob.alpha})`);
    gradient.addColorStop(1, "rgba(255,96,64,0)");
    ctx.fillStyle = gradient;
    ctx.beginPath();
    ctx.arc(blob.x, blob.y, blob.radius, 0, Math.PI * 2);
    ctx.fill();
  }
  ctx.fillStyle = "#7fd4ff";
  for (const marker of model.markers) {
    ctx.beginPath();
    ctx.arc(marker.x, marker.y, 3, 0, Math.PI * 2);
    ctx.fill();
  }
}

export function drawTimeSeries(canvas: HTMLCanvasElement, model: TimeSeriesModel): void {
  const ctx = ctx2d(canvas);
  const w = canvas.width;
  const h = canvas.height;
  const pad = 8;
  ctx.strokeStyle = "#7fd4ff";
  ctx.beginPath();
  model.points.forEach((p, i) => {
    const x = pad + p.x * (w - 2 * pad);
    const y = h - pad - p.y * (h - 2 * pad);
    if (i === 0) {
      ctx.moveTo(x, y);
    } else {
      ctx.lineTo(x, y);
    }
  });
  ctx.stroke();
  ctx.fillStyle = "#ff6040";
  for (const mark of model.outliers) {
    const x = pad + mark.x * (w - 2 * pad);
    const y = h - pad - mark.y * (h - 2 * pad);
    ctx.beginPath();
    ctx.arc(x, y, 5, 0, Math.PI * 2);
    ctx.fill();
  }
}

export function drawCircadian(canvas: HTMLCanvasElement, model: CircadianModel): void {
  const ctx = ctx2d(canvas);
  ctx.fillStyle = "#10212f";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  const cw = canvas.width / Math.max(1, model.days.length);
  const ch = canvas.height / 24;
  for (const cell of model.cells) {
    ctx.fillStyle = cell.color;
    ctx.fillRect(cell.dayIndex * cw, cell.hour * ch, Math.ceil(cw), Math.ceil(ch));
  }
}

export function drawScatter(canvas: HTMLCanvasElement, model: ScatterModel): void {
  const ctx = ctx2d(canvas);
  const pad = 10;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  ctx.fillStyle = "#7fd4ff";
  for (const point of model.points) {
    const x = pad + (model.maxX ? point.x / model.maxX : 0) * w;
    const y = canvas.height - pad - (model.maxY ? point.y / model.maxY : 0) * h;
    ctx.fillRect(x - 1.5, y - 1.5, 3, 3);
  }
}

export function drawWaveform(canvas: HTMLCanvasElement, model: WaveformModel): void {
  const ctx = ctx2d(canvas);
  const mid = canvas.height / 2;
  ctx.strokeStyle = "#9fe6a0";
  ctx.beginPath();
  model.columns.forEach((column, x) => {
    ctx.moveTo(x + 0.5, mid - column.max * mid);
    ctx.lineTo(x + 0.5, mid - column.min * mid);
  });
  ctx.stroke();
}

export function drawPsd(canvas: HTMLCanvasElement, model: PsdModel): void {
  const ctx = ctx2d(canvas);
  ctx.strokeStyle = "#ffd166";
  ctx.beginPath();
  model.polyline.forEach((p, i) => {
    const x = p.x * canvas.width;
    const y = canvas.height - p.y * canvas.height;
    if (i === 0) {
      ctx.moveTo(x, y);
    } else {
      ctx.lineTo(x, y);
    }
  });
  ctx.stroke();
}

export function drawSpectrogram(canvas: HTMLCanvasElement, model: SpectrogramModel): void {
  const image = new ImageData(model.pixels, model.width, model.height);
  canvas.width = model.width;
  canvas.height = model.height;
  const ctx = ctx2d(canvas);
  ctx.putImageData(image, 0, 0);
}
