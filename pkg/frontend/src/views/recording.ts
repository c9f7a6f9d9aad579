/** Recording viewer: waveform (decoded from the payload for display only),
 * PSD polyline, spectrogram pixels, and the verdict badge. All numbers shown
 * to the user (f0, harmonics, rates, verdict) come from the analysis API. */

import { clamp01, colorFor } from "../scales.js";
import type { DspAnalysisDoc } from "../types.js";

export interface WaveformModel {
  /** min/max envelope per pixel column, in [-1, 1] */
  columns: { min: number; max: number }[];
  sampleRate: number;
  durationS: number;
}

/** Minimal RIFF/WAVE PCM16 reader, enough to draw what the device uploaded. */
export function decodeWavForDisplay(buffer: ArrayBuffer): { samples: Float32Array; sampleRate: number } {
  const view = new DataView(buffer);
  const tag = (at: number) => String.fromCharCode(...new Uint8Array(buffer, at, 4));
  if (buffer.byteLength < 44 || tag(0) !== "RIFF" || tag(8) !== "WAVE") {
    throw new Error("not a RIFF/WAVE payload");
  }
  let pos = 12;
  let sampleRate = 0;
  let bits = 0;
  let channels = 1;
  let data: Int16Array | null = null;
  while (pos + 8 <= buffer.byteLength) {
    const id = tag(pos);
    const size = view.getUint32(pos + 4, true);
    if (id === "fmt ") {
      channels = view.getUint16(pos + 10, true);
      sampleRate = view.getUint32(pos + 12, true);
      bits = view.getUint16(pos + 22, true);
    } else if (id === "data") {
      data = new Int16Array(buffer, pos + 8, Math.floor(size / 2));
    }
    pos += 8 + size + (size % 2);
  }
  if (!data || sampleRate === 0) {
    throw new Error("missing fmt/data chunk");
  }
  if (bits !== 16) {
    throw new Error(`display decoder handles 16-bit PCM only, got ${bits}-bit`);
  }
  const frames = Math.floor(data.length / channels);
  const samples = new Float32Array(frames);
  for (let i = 0; i < frames; i++) {
    samples[i] = data[i * channels] / 32768;
  }
  return { samples, sampleRate };
}

export function buildWaveformModel(
  samples: Float32Array,
  sampleRate: number,
  widthPx: number,
): WaveformModel {
  const columns: { min: number; max: number }[] = [];
  const perColumn = Math.max(1, Math.floor(samples.length / widthPx));
  for (let x = 0; x < widthPx && x * perColumn < samples.length; x++) {
    let lo = 1.0;
    let hi = -1.0;
    const end = Math.min(samples.length, (x + 1) * perColumn);
    for (let i = x * perColumn; i < end; i++) {
      if (samples[i] < lo) lo = samples[i];
      if (samples[i] > hi) hi = samples[i];
    }
    columns.push({ min: lo, max: hi });
  }
  return { columns, sampleRate, durationS: samples.length / sampleRate };
}

export interface PsdModel {
  /** normalized polyline: x in [0,1] over frequency, y in [0,1] over dB range */
  polyline: { x: number; y: number }[];
  maxFreq: number;
  fundamentalHz: number | null;
  harmonicsHz: number[];
  displayed: number[];
}

export function buildPsdModel(doc: DspAnalysisDoc): PsdModel {
  const pairs = doc.psd ?? [];
  const maxFreq = pairs.length ? pairs[pairs.length - 1][0] : 1;
  const floor = 1e-20;
  const dbs = pairs.map(([, p]) => 10 * Math.log10(Math.max(p, floor)));
  const dbMax = dbs.length ? Math.max(...dbs) : 0;
  const dbMin = dbMax - 90;
  const polyline = pairs.map(([freq], i) => ({
    x: freq / (maxFreq || 1),
    y: clamp01((dbs[i] - dbMin) / (dbMax - dbMin || 1)),
  }));
  return {
    polyline,
    maxFreq,
    fundamentalHz: doc.fundamental_hz,
    harmonicsHz: doc.harmonics_hz,
    displayed: [
      ...(doc.fundamental_hz === null ? [] : [doc.fundamental_hz]),
      ...doc.harmonics_hz,
    ],
  };
}

export interface SpectrogramModel {
  width: number;
  height: number;
  /** row-major RGBA pixels, one per (time, frequency) cell, low freq at bottom */
  pixels: Uint8ClampedArray;
  maxTime: number;
  maxFreq: number;
}

export function buildSpectrogramModel(doc: DspAnalysisDoc): SpectrogramModel | null {
  const spec = doc.spectrogram;
  if (!spec) {
    return null;
  }
  const width = spec.times.length;
  const height = spec.freqs.length;
  let peak = 0;
  for (const row of spec.magnitude) {
    for (const v of row) {
      if (v > peak) peak = v;
    }
  }
  const floorDb = -80;
  const pixels = new Uint8ClampedArray(width * height * 4);
  for (let x = 0; x < width; x++) {
    for (let y = 0; y < height; y++) {
      const mag = spec.magnitude[x][y];
      const db = 20 * Math.log10(Math.max(mag, peak * 1e-6) / (peak || 1));
      const t = clamp01((db - floorDb) / -floorDb);
      const rgb = colorFor(t, { min: 0, max: 1 });
      const [r, g, b] = rgb.match(/\d+/g)!.map(Number);
      const row = height - 1 - y; // low frequencies at the bottom
      const at = 4 * (row * width + x);
      pixels[at] = r;
      pixels[at + 1] = g;
      pixels[at + 2] = b;
      pixels[at + 3] = 255;
    }
  }
  return {
    width,
    height,
    pixels,
    maxTime: spec.times[width - 1] ?? 0,
    maxFreq: spec.freqs[height - 1] ?? 0,
  };
}

export interface VerdictBadge {
  label: string;
  tone: "good" | "bad" | "neutral";
  displayed: number[];
}

export function buildVerdictBadge(doc: DspAnalysisDoc): VerdictBadge {
  const verdict = doc.verdict ?? {};
  if (typeof verdict["sex"] === "string") {
    const sex = verdict["sex"] as string;
    return {
      label: `sex: ${sex}`,
      tone: sex === "unknown" ? "neutral" : "good",
      displayed: [],
    };
  }
  if (typeof verdict["infested"] === "boolean") {
    const infested = verdict["infested"] as boolean;
    const confidence = verdict["confidence"];
    const rate = doc.impulses?.impulse_rate_per_min;
    return {
      label:
        `${infested ? "infested" : "not infested"}` +
        (typeof confidence === "number" ? ` (confidence ${confidence})` : ""),
      tone: infested ? "bad" : "good",
      displayed: [
        ...(typeof confidence === "number" ? [confidence] : []),
        ...(typeof rate === "number" ? [rate] : []),
      ],
    };
  }
  return { label: "no verdict", tone: "neutral", displayed: [] };
}
