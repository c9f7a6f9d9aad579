/** API document shapes (mirrors the server's canonical JSON documents). */

export interface ParamInfo {
  name: string;
  type:
    | "integer"
    | "number"
    | "string"
    | "enum"
    | "datetime"
    | "hours"
    | "bbox"
    | "devices";
  description: string;
  required: boolean;
  location: "query" | "path";
  default?: string | number;
  minimum?: number;
  maximum?: number;
  enum?: string[];
}

export interface ToolInfo {
  name: string;
  description: string;
  endpoint: string;
  method: "GET";
  params: ParamInfo[];
  result: { type: string; description?: string };
}

export interface ToolManifest {
  version: number;
  meta_schema: object;
  tools: ToolInfo[];
}

export interface ApiError {
  error: string;
  field: string | null;
  message: string;
}

export interface ReadingDoc {
  timestamp: string;
  counts: number;
  temperature: number;
  humidity: number;
  lat: number;
  long: number;
  device: string;
}

export interface OutlierDoc {
  timestamp: string;
  counts: number;
  hour: number;
  z_score: number;
  hour_mean: number;
  hour_std: number;
}

export interface PointDoc {
  lat: number;
  long: number;
}

export interface LocationsDoc {
  count: number;
  locations: { point: PointDoc; devices: string[] }[];
}

export interface HeatPointDoc {
  point: PointDoc;
  weight: number;
}

export interface HeatmapDoc {
  rows: number[];
  cols: string[];
  cells: (number | null)[][];
  metric: "counts" | "temperature" | "humidity";
  scale_hint: [number, number] | null;
}

export interface CorrelationDoc {
  devices: string[];
  matrix: (number | null)[][];
}

export interface SpectrogramDoc {
  times: number[];
  freqs: number[];
  magnitude: number[][];
}

export interface DspAnalysisDoc {
  psd: [number, number][] | null;
  spectrogram: SpectrogramDoc | null;
  fundamental_hz: number | null;
  harmonics_hz: number[];
  verdict: Record<string, unknown> | null;
  impulses: {
    impulse_times: number[];
    impulse_rate_per_min: number;
    threshold_used: number;
    infested: boolean | null;
  } | null;
}

export interface BBoxValue {
  latMin: number;
  latMax: number;
  longMin: number;
  longMax: number;
}
