/** Form specs generated purely from the tool manifest: adding a server
 * operation yields a new form with zero console changes. */

import type { ParamInfo, ToolInfo } from "./types.js";

export type WidgetKind = "number" | "select" | "text";

export interface FieldSpec {
  name: string;
  label: string;
  widget: WidgetKind;
  required: boolean;
  help: string;
  placeholder: string;
  defaultValue: string;
  options?: string[];
  min?: number;
  max?: number;
  step?: number;
}

export interface FormSpec {
  tool: ToolInfo;
  title: string;
  description: string;
  fields: FieldSpec[];
}

const PLACEHOLDERS: Record<ParamInfo["type"], string> = {
  integer: "e.g. 3",
  number: "e.g. 1.5",
  string: "",
  enum: "",
  datetime: "YYYY-MM-DDTHH:MM",
  hours: "e.g. 21,22,23,0,1,2,3,4",
  bbox: "lat_min,lat_max,long_min,long_max",
  devices: "e.g. 100,101",
};

function fieldFor(param: ParamInfo): FieldSpec {
  const base: FieldSpec = {
    name: param.name,
    label: param.name.replace(/_/g, " "),
    widget: "text",
    required: param.required,
    help: param.description,
    placeholder: PLACEHOLDERS[param.type] ?? "",
    defaultValue: param.default === undefined ? "" : String(param.default),
  };
  if (param.type === "enum" && param.enum) {
    return { ...base, widget: "select", options: param.enum };
  }
  if (param.type === "integer" || param.type === "number") {
    return {
      ...base,
      widget: "number",
      min: param.minimum,
      max: param.maximum,
      step: param.type === "integer" ? 1 : undefined,
    };
  }
  return base;
}

export function toFormSpec(tool: ToolInfo): FormSpec {
  return {
    tool,
    title: tool.name,
    description: tool.description,
    fields: tool.params.map(fieldFor),
  };
}

export function formsFromManifest(tools: ToolInfo[]): FormSpec[] {
  return tools.map(toFormSpec);
}

/** Client-side pre-validation mirroring the declared ranges; the server
 * remains authoritative and its structured errors land next to the field. */
export function validateValues(
  spec: FormSpec,
  values: Record<string, string>,
): Map<string, string> {
  const problems = new Map<string, string>();
  for (const field of spec.fields) {
    const raw = values[field.name] ?? "";
    if (raw === "") {
      if (field.required) {
        problems.set(field.name, "required");
      }
      continue;
    }
    if (field.widget === "number") {
      const value = Number(raw);
      if (Number.isNaN(value)) {
        problems.set(field.name, "not a number");
      } else if (field.min !== undefined && value < field.min) {
        problems.set(field.name, `must be >= ${field.min}`);
      } else if (field.max !== undefined && value > field.max) {
        problems.set(field.name, `must be <= ${field.max}`);
      }
    }
    if (field.widget === "select" && field.options && !field.options.includes(raw)) {
      problems.set(field.name, `one of: ${field.options.join(", ")}`);
    }
  }
  return problems;
}
