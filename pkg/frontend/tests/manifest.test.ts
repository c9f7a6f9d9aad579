import { describe, expect, it } from "vitest";

import { formsFromManifest, toFormSpec, validateValues } from "../src/manifest.js";
import type { ToolInfo, ToolManifest } from "../src/types.js";
import { fixture } from "./support.js";

const manifest = fixture<ToolManifest>("manifest.json");

describe("form generation from the manifest", () => {
  it("produces exactly one form per tool", () => {
    const forms = formsFromManifest(manifest.tools);
    expect(forms.length).toBe(manifest.tools.length);
    expect(new Set(forms.map((f) => f.title)).size).toBe(manifest.tools.length);
  });

  it("maps parameter types to widgets", () => {
    const byName = new Map(manifest.tools.map((t) => [t.name, t]));
    const nearest = toFormSpec(byName.get("nearest")!);
    const widgets = new Map(nearest.fields.map((f) => [f.name, f.widget]));
    expect(widgets.get("lat")).toBe("number");
    expect(widgets.get("k")).toBe("number");

    const extremes = toFormSpec(byName.get("extremes")!);
    expect(extremes.fields[0].widget).toBe("select");
    expect(extremes.fields[0].options).toEqual(["hour", "day", "week"]);
  });

  it("propagates defaults, ranges, and required flags", () => {
    const byName = new Map(manifest.tools.map((t) => [t.name, t]));
    const outliers = toFormSpec(byName.get("outliers")!);
    const k = outliers.fields.find((f) => f.name === "k")!;
    expect(k.defaultValue).toBe("3");
    expect(k.min).toBe(0);
    const device = outliers.fields.find((f) => f.name === "device")!;
    expect(device.required).toBe(true);
  });

  it("is pure manifest-driven: a synthetic tool becomes a form unchanged", () => {
    const invented: ToolInfo = {
      name: "made-up",
      description: "not hand-coded anywhere",
      endpoint: "/api/analytics/made-up",
      method: "GET",
      params: [
        {
          name: "alpha", type: "number", description: "", required: true,
          location: "query", minimum: 0, maximum: 1,
        },
      ],
      result: { type: "object" },
    };
    const form = toFormSpec(invented);
    expect(form.fields).toHaveLength(1);
    expect(form.fields[0].widget).toBe("number");
  });

  it("validates against declared ranges client-side", () => {
    const byName = new Map(manifest.tools.map((t) => [t.name, t]));
    const spec = toFormSpec(byName.get("nearest")!);
    expect(validateValues(spec, { lat: "39.6", long: "22.4" }).size).toBe(0);
    expect(validateValues(spec, { long: "22.4" }).get("lat")).toBe("required");
    expect(validateValues(spec, { lat: "95", long: "22.4" }).get("lat")).toContain("<= 90");
  });
});
