/** Console entry point: tabs for the built-in views plus one auto-generated
 * form per manifest tool; every query lands in the session history. */

import { ApiClient, ApiRequestError, LatestWins } from "./api.js";
import { el, jsonPanel, renderForm } from "./dom.js";
import { formsFromManifest } from "./manifest.js";
import { QuerySession } from "./session.js";
import {
  drawCircadian,
  drawMap,
  drawPsd,
  drawScatter,
  drawSpectrogram,
  drawTimeSeries,
  drawWaveform,
} from "./render.js";
import type {
  BBoxValue,
  CorrelationDoc,
  DspAnalysisDoc,
  HeatPointDoc,
  HeatmapDoc,
  LocationsDoc,
  OutlierDoc,
  ReadingDoc,
  ToolManifest,
} from "./types.js";
import { buildCircadianModel } from "./views/circadian.js";
import { buildMapModel, dragToBBox, formatBBox } from "./views/map.js";
import {
  buildPsdModel,
  buildSpectrogramModel,
  buildVerdictBadge,
  buildWaveformModel,
  decodeWavForDisplay,
} from "./views/recording.js";
import { buildScatterModel } from "./views/scatter.js";
import { buildTimeSeriesModel } from "./views/timeseries.js";

interface DeviceDoc {
  device: string;
  kind: string;
  last_position: { lat: number; long: number } | null;
}

interface RecordingListDoc {
  asset_id: string;
  kind: string;
  filename: string;
  device: string;
}

const client = new ApiClient();
const session = new QuerySession(client);
const latest = new LatestWins<unknown>();

function canvas(width: number, height: number): HTMLCanvasElement {
  const node = el("canvas");
  node.width = width;
  node.height = height;
  return node;
}

function deviceSelect(devices: DeviceDoc[], kind?: string): HTMLSelectElement {
  const select = el("select");
  for (const device of devices) {
    if (kind && device.kind !== kind) {
      continue;
    }
    select.append(el("option", { value: device.device }, [device.device]));
  }
  return select;
}

function statusLine(): HTMLElement {
  return el("p", { class: "status" });
}

function showError(target: HTMLElement, error: unknown): void {
  target.textContent =
    error instanceof ApiRequestError
      ? `${error.detail.error}: ${error.detail.message}`
      : String(error);
}

// -- map -------------------------------------------------------------------------

function mapTab(devices: DeviceDoc[]): HTMLElement {
  const root = el("section");
  const surface = canvas(720, 480);
  const status = statusLine();
  const positions = devices
    .map((d) => d.last_position)
    .filter((p): p is { lat: number; long: number } => p !== null);
  let viewport: BBoxValue = positions.length
    ? {
        latMin: Math.min(...positions.map((p) => p.lat)) - 0.05,
        latMax: Math.max(...positions.map((p) => p.lat)) + 0.05,
        longMin: Math.min(...positions.map((p) => p.long)) - 0.05,
        longMax: Math.max(...positions.map((p) => p.long)) + 0.05,
      }
    : { latMin: 34, latMax: 42, longMin: 19, longMax: 29 };

  async function refresh() {
    try {
      const bboxParam = formatBBox(viewport);
      const locations = await client.getJson<LocationsDoc>("/api/analytics/locations");
      const heat = await client.getJson<HeatPointDoc[]>(
        `/api/analytics/heatpoints?bbox=${bboxParam}`,
      );
      latest.accept("map", heat.requestId, heat.body, (body) => {
        const model = buildMapModel(
          locations.body,
          body as HeatPointDoc[],
          viewport,
          surface.width,
          surface.height,
        );
        drawMap(surface, model);
        status.textContent =
          `${model.locationCount} unique locations; drag to zoom the heat overlay ` +
          `(bbox ${bboxParam})`;
      });
    } catch (error) {
      showError(status, error);
    }
  }

  let dragStart: { x: number; y: number } | null = null;
  surface.addEventListener("mousedown", (e) => {
    dragStart = { x: e.offsetX, y: e.offsetY };
  });
  surface.addEventListener("mouseup", (e) => {
    if (!dragStart) {
      return;
    }
    if (Math.abs(e.offsetX - dragStart.x) > 10 && Math.abs(e.offsetY - dragStart.y) > 10) {
      viewport = dragToBBox(
        viewport, surface.width, surface.height,
        dragStart.x, dragStart.y, e.offsetX, e.offsetY,
      );
      void refresh();
    }
    dragStart = null;
  });

  root.append(el("h2", {}, ["fleet map"]), surface, status);
  void refresh();
  return root;
}

// -- time series -----------------------------------------------------------------

function seriesTab(devices: DeviceDoc[]): HTMLElement {
  const root = el("section");
  const picker = deviceSelect(devices, "efunnel");
  const kInput = el("input", { type: "number", value: "3", step: "0.5", min: "0" });
  const hoursInput = el("input", { type: "text", placeholder: "hours (optional)" });
  const surface = canvas(720, 300);
  const status = statusLine();

  async function refresh() {
    const device = picker.value;
    if (!device) {
      return;
    }
    try {
      const readings = await client.getJson<ReadingDoc[]>(
        `/api/devices/${encodeURIComponent(device)}/readings`,
      );
      const hours = hoursInput.value.trim();
      const query =
        `/api/analytics/outliers?device=${encodeURIComponent(device)}` +
        `&k=${encodeURIComponent(kInput.value || "3")}` +
        (hours ? `&hours=${encodeURIComponent(hours)}` : "");
      const outliers = await client.getJson<OutlierDoc[]>(query);
      latest.accept("series", outliers.requestId, outliers.body, (body) => {
        const model = buildTimeSeriesModel(readings.body, body as OutlierDoc[]);
        drawTimeSeries(surface, model);
        status.textContent =
          `device ${device}: ${model.points.length} hourly readings, ` +
          `${model.outliers.length} outliers at k=${kInput.value}`;
      });
    } catch (error) {
      showError(status, error);
    }
  }

  picker.addEventListener("change", () => void refresh());
  kInput.addEventListener("change", () => void refresh()); // re-marks without reload
  hoursInput.addEventListener("change", () => void refresh());
  root.append(
    el("h2", {}, ["time series"]),
    el("div", { class: "controls" }, ["device ", picker, " k ", kInput, " ", hoursInput]),
    surface,
    status,
  );
  void refresh();
  return root;
}

// -- circadian heatmap ------------------------------------------------------------

function circadianTab(devices: DeviceDoc[]): HTMLElement {
  const root = el("section");
  const metric = el("select");
  for (const option of ["counts", "temperature", "humidity"]) {
    metric.append(el("option", { value: option }, [option]));
  }
  const picker = deviceSelect(devices, "efunnel");
  picker.prepend(el("option", { value: "" }, ["(all devices)"]));
  picker.value = "";
  const surface = canvas(720, 360);
  const bar = el("div", { class: "colorbar" });
  const status = statusLine();

  async function refresh() {
    try {
      const device = picker.value;
      const query =
        `/api/analytics/circadian?metric=${metric.value}` +
        (device ? `&device=${encodeURIComponent(device)}` : "");
      const { requestId, body } = await client.getJson<HeatmapDoc>(query);
      latest.accept("circadian", requestId, body, (doc) => {
        const model = buildCircadianModel(doc as HeatmapDoc);
        drawCircadian(surface, model);
        bar.replaceChildren(
          ...model.colorbar.map((tick) =>
            el("span", { class: "tick", style: `background:${tick.color}` }, [
              String(tick.value),
            ]),
          ),
        );
        status.textContent =
          `${model.metric} over ${model.days.length} days, scale ` +
          `${model.scale.min}..${model.scale.max}`;
      });
    } catch (error) {
      showError(status, error);
    }
  }

  metric.addEventListener("change", () => void refresh());
  picker.addEventListener("change", () => void refresh());
  root.append(
    el("h2", {}, ["circadian heatmap"]),
    el("div", { class: "controls" }, ["metric ", metric, " device ", picker]),
    surface,
    bar,
    status,
  );
  void refresh();
  return root;
}

// -- scatter ------------------------------------------------------------------------

function scatterTab(devices: DeviceDoc[]): HTMLElement {
  const root = el("section");
  const pickA = deviceSelect(devices, "efunnel");
  const pickB = deviceSelect(devices, "efunnel");
  if (pickB.options.length > 1) {
    pickB.selectedIndex = 1;
  }
  const surface = canvas(480, 480);
  const status = statusLine();

  async function refresh() {
    try {
      const [a, b, correlation] = await Promise.all([
        client.getJson<ReadingDoc[]>(`/api/devices/${pickA.value}/readings`),
        client.getJson<ReadingDoc[]>(`/api/devices/${pickB.value}/readings`),
        client.getJson<CorrelationDoc>(
          `/api/analytics/correlation?devices=${pickA.value},${pickB.value}`,
        ),
      ]);
      latest.accept("scatter", correlation.requestId, null, () => {
        const model = buildScatterModel(a.body, b.body, correlation.body);
        drawScatter(surface, model);
        status.textContent =
          model.r === null
            ? `r unavailable for ${model.deviceA} vs ${model.deviceB}`
            : `Pearson r = ${model.r} (${model.deviceA} vs ${model.deviceB}, ` +
              `${model.points.length} common hours)`;
      });
    } catch (error) {
      showError(status, error);
    }
  }

  pickA.addEventListener("change", () => void refresh());
  pickB.addEventListener("change", () => void refresh());
  root.append(
    el("h2", {}, ["count correlation"]),
    el("div", { class: "controls" }, [pickA, " vs ", pickB]),
    surface,
    status,
  );
  void refresh();
  return root;
}

// -- recordings -----------------------------------------------------------------------

function recordingTab(): HTMLElement {
  const root = el("section");
  const picker = el("select");
  const wave = canvas(720, 140);
  const psd = canvas(720, 180);
  const spec = canvas(720, 200);
  const badge = el("span", { class: "badge" });
  const status = statusLine();

  async function loadList() {
    try {
      const { body } = await client.getJson<RecordingListDoc[]>("/api/recordings");
      picker.replaceChildren(
        ...body.map((r) => el("option", { value: r.asset_id }, [r.filename])),
      );
      if (body.length) {
        await show(body[0]);
      } else {
        status.textContent = "no recordings uploaded yet";
      }
    } catch (error) {
      showError(status, error);
    }
  }

  async function show(recording: RecordingListDoc) {
    try {
      const ops =
        recording.kind === "vibration"
          ? "psd,spectrogram,impulses"
          : "psd,spectrogram,fundamental,classify";
      const analysis = await client.getJson<DspAnalysisDoc>(
        `/api/dsp/${recording.asset_id}/analysis?ops=${ops}`,
      );
      const payload = await client.payload(recording.asset_id);
      const decoded = decodeWavForDisplay(payload);
      drawWaveform(wave, buildWaveformModel(decoded.samples, decoded.sampleRate, wave.width));
      drawPsd(psd, buildPsdModel(analysis.body));
      const spectro = buildSpectrogramModel(analysis.body);
      if (spectro) {
        drawSpectrogram(spec, spectro);
      }
      const verdict = buildVerdictBadge(analysis.body);
      badge.textContent = verdict.label;
      badge.className = `badge ${verdict.tone}`;
      const f0 = analysis.body.fundamental_hz;
      status.textContent = f0 === null ? recording.filename : `${recording.filename}: fundamental ${f0} Hz`;
    } catch (error) {
      showError(status, error);
    }
  }

  picker.addEventListener("change", async () => {
    const { body } = await client.getJson<RecordingListDoc[]>("/api/recordings");
    const chosen = body.find((r) => r.asset_id === picker.value);
    if (chosen) {
      await show(chosen);
    }
  });
  root.append(
    el("h2", {}, ["recordings"]),
    el("div", { class: "controls" }, [picker, " ", badge]),
    el("h4", {}, ["waveform"]), wave,
    el("h4", {}, ["power spectral density"]), psd,
    el("h4", {}, ["spectrogram"]), spec,
    status,
  );
  void loadList();
  return root;
}

// -- manifest tools + session ------------------------------------------------------------

function toolsTab(manifest: ToolManifest, sessionList: HTMLElement): HTMLElement {
  const root = el("section");
  root.append(
    el("h2", {}, ["tools"]),
    el("p", { class: "hint" }, [
      `${manifest.tools.length} operations, forms generated from the manifest`,
    ]),
  );
  for (const spec of formsFromManifest(manifest.tools)) {
    const result = el("div", { class: "tool-result" });
    const form = renderForm(spec, async (values) => {
      try {
        const entry = await session.run(spec.tool, values);
        result.replaceChildren(
          el("p", {}, [
            `#${entry.id} ${spec.tool.name} `,
            refineButton(entry.id, form),
          ]),
          jsonPanel(entry.result),
        );
        appendSessionEntry(sessionList, entry.id, spec.tool.name, values);
      } catch (error) {
        if (error instanceof ApiRequestError) {
          form.showError(error.detail);
        } else {
          form.showError({ error: "request_failed", field: null, message: String(error) });
        }
      }
    });
    root.append(form.root, result);
  }
  return root;
}

function refineButton(entryId: number, form: ReturnType<typeof renderForm>): HTMLElement {
  const button = el("button", { type: "button" }, ["refine"]);
  button.addEventListener("click", () => {
    const entry = session.entries.find((e) => e.id === entryId);
    if (entry) {
      form.setValues(entry.params);
      form.root.scrollIntoView();
    }
  });
  return button;
}

function appendSessionEntry(
  list: HTMLElement,
  id: number,
  tool: string,
  params: Record<string, string>,
): void {
  list.append(
    el("li", {}, [
      `#${id} ${tool} ${JSON.stringify(params)} @ ${new Date().toLocaleTimeString()}`,
    ]),
  );
}

function sessionTab(list: HTMLElement): HTMLElement {
  const root = el("section");
  const status = statusLine();
  const replay = el("button", { type: "button" }, ["replay history"]);
  replay.addEventListener("click", async () => {
    try {
      const fresh = await session.replay();
      const stable = fresh.every(
        (result, i) => JSON.stringify(result) === JSON.stringify(session.entries[i].result),
      );
      status.textContent = stable
        ? `replayed ${fresh.length} queries: all views reproduced`
        : `replayed ${fresh.length} queries: store has changed since`;
    } catch (error) {
      showError(status, error);
    }
  });
  root.append(el("h2", {}, ["session"]), replay, list, status);
  return root;
}

// -- boot --------------------------------------------------------------------------------

async function boot() {
  const app = document.getElementById("app");
  if (!app) {
    return;
  }
  let manifest: ToolManifest;
  let devices: DeviceDoc[];
  try {
    manifest = await client.manifest();
    devices = (await client.getJson<DeviceDoc[]>("/api/devices")).body;
  } catch (error) {
    app.append(el("p", { class: "error" }, [`cannot reach the API: ${String(error)}`]));
    return;
  }

  const sessionList = el("ul", { class: "session-list" });
  const tabs: Record<string, () => HTMLElement> = {
    map: () => mapTab(devices),
    "time series": () => seriesTab(devices),
    circadian: () => circadianTab(devices),
    scatter: () => scatterTab(devices),
    recordings: () => recordingTab(),
    tools: () => toolsTab(manifest, sessionList),
    session: () => sessionTab(sessionList),
  };
  const nav = el("nav");
  const body = el("main");
  const rendered = new Map<string, HTMLElement>();
  for (const name of Object.keys(tabs)) {
    const button = el("button", { type: "button" }, [name]);
    button.addEventListener("click", () => {
      let panel = rendered.get(name);
      if (!panel) {
        panel = tabs[name]();
        rendered.set(name, panel);
      }
      body.replaceChildren(panel);
    });
    nav.append(button);
  }
  app.append(nav, body);
  (nav.firstElementChild as HTMLButtonElement | null)?.click();
}

void boot();
