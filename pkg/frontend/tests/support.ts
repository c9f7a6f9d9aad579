/** Test support: fixture loading and a scripted fetch. Fixtures are recorded
 * API responses (scripts/record_fixtures.py); tests treat them as the wire. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

const HERE = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(HERE, "fixtures", name), "utf-8")) as T;
}

export function fixtureBytes(name: string): ArrayBuffer {
  const buffer = readFileSync(join(HERE, "fixtures", name));
  return buffer.buffer.slice(buffer.byteOffset, buffer.byteOffset + buffer.byteLength);
}

export interface Route {
  match: string | RegExp;
  body: unknown;
  status?: number;
}

/** fetch stand-in answering from a route table; records every URL hit. */
export function scriptedFetch(routes: Route[]): { fetch: FetchLike; urls: string[] } {
  const urls: string[] = [];
  const fetchFn: FetchLike = async (url) => {
    urls.push(url);
    const route = routes.find((r) =>
      typeof r.match === "string" ? url === r.match || url.startsWith(r.match) : r.match.test(url),
    );
    if (!route) {
      return fakeResponse(404, { error: "not_found", field: null, message: url });
    }
    return fakeResponse(route.status ?? 200, route.body);
  };
  return { fetch: fetchFn, urls };
}

export function fakeResponse(status: number, body: unknown): Response {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
    arrayBuffer: async () => body as ArrayBuffer,
  } as unknown as Response;
}

/** Every number reachable anywhere inside a JSON document. */
export function collectNumbers(doc: unknown, into = new Set<number>()): Set<number> {
  if (typeof doc === "number") {
    into.add(doc);
  } else if (Array.isArray(doc)) {
    for (const item of doc) {
      collectNumbers(item, into);
    }
  } else if (doc !== null && typeof doc === "object") {
    for (const value of Object.values(doc)) {
      collectNumbers(value, into);
    }
  }
  return into;
}
