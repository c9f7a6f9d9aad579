/** Small DOM helpers plus the manifest-driven form renderer. */

import type { FieldSpec, FormSpec } from "./manifest.js";
import { validateValues } from "./manifest.js";
import type { ApiError } from "./types.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

function inputFor(field: FieldSpec): HTMLInputElement | HTMLSelectElement {
  if (field.widget === "select" && field.options) {
    const select = el("select", { name: field.name });
    for (const option of field.options) {
      const item = el("option", { value: option }, [option]);
      if (option === field.defaultValue) {
        item.selected = true;
      }
      select.append(item);
    }
    return select;
  }
  const input = el("input", {
    name: field.name,
    type: field.widget === "number" ? "number" : "text",
    placeholder: field.placeholder,
    value: field.defaultValue,
  });
  if (field.min !== undefined) input.min = String(field.min);
  if (field.max !== undefined) input.max = String(field.max);
  if (field.step !== undefined) input.step = String(field.step);
  return input;
}

export interface RenderedForm {
  root: HTMLFormElement;
  values(): Record<string, string>;
  setValues(values: Record<string, string>): void;
  showError(error: ApiError): void;
  clearErrors(): void;
}

export function renderForm(
  spec: FormSpec,
  onSubmit: (values: Record<string, string>) => void,
): RenderedForm {
  const form = el("form", { class: "tool-form" });
  const errorSlots = new Map<string, HTMLElement>();
  const generalError = el("p", { class: "error general hidden" });

  form.append(
    el("h3", {}, [spec.title]),
    el("p", { class: "hint" }, [spec.description]),
  );
  for (const field of spec.fields) {
    const slot = el("span", { class: "error hidden" });
    errorSlots.set(field.name, slot);
    form.append(
      el("label", {}, [
        el("span", { class: "label" }, [
          field.label + (field.required ? " *" : ""),
        ]),
        inputFor(field),
        el("span", { class: "hint" }, [field.help]),
        slot,
      ]),
    );
  }
  form.append(el("button", { type: "submit" }, ["run"]), generalError);

  const rendered: RenderedForm = {
    root: form,
    values() {
      const out: Record<string, string> = {};
      for (const field of spec.fields) {
        const input = form.elements.namedItem(field.name) as
          | HTMLInputElement
          | HTMLSelectElement;
        if (input && input.value !== "") {
          out[field.name] = input.value;
        }
      }
      return out;
    },
    setValues(values) {
      for (const [name, value] of Object.entries(values)) {
        const input = form.elements.namedItem(name) as
          | HTMLInputElement
          | HTMLSelectElement
          | null;
        if (input) {
          input.value = value;
        }
      }
    },
    showError(error) {
      const slot = error.field ? errorSlots.get(error.field) : undefined;
      const target = slot ?? generalError;
      target.textContent = `${error.error}: ${error.message}`;
      target.classList.remove("hidden");
    },
    clearErrors() {
      generalError.classList.add("hidden");
      for (const slot of errorSlots.values()) {
        slot.classList.add("hidden");
      }
    },
  };

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    rendered.clearErrors();
    const values = rendered.values();
    const problems = validateValues(spec, values);
    if (problems.size > 0) {
      for (const [field, message] of problems) {
        rendered.showError({ error: "invalid", field, message });
      }
      return;
    }
    onSubmit(values);
  });
  return rendered;
}

export function jsonPanel(value: unknown): HTMLElement {
  return el("pre", { class: "result-json" }, [JSON.stringify(value, null, 2)]);
}
