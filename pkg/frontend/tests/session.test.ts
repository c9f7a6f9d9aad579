import { describe, expect, it } from "vitest";

import { ApiClient, LatestWins } from "../src/api.js";
import { QuerySession } from "../src/session.js";
import type { ToolManifest } from "../src/types.js";
import { fixture, scriptedFetch } from "./support.js";

const manifest = fixture<ToolManifest>("manifest.json");
const outliersTool = manifest.tools.find((t) => t.name === "outliers")!;

function clientFor(routes: Parameters<typeof scriptedFetch>[0]) {
  const { fetch, urls } = scriptedFetch(routes);
  return { client: new ApiClient("", fetch, null, true), urls };
}

describe("query session", () => {
  it("appends run and refine entries with merged params", async () => {
    const { client, urls } = clientFor([
      { match: /k=3/, body: [{ counts: 50 }] },
      { match: /k=2/, body: [{ counts: 50 }, { counts: 31 }] },
    ]);
    const session = new QuerySession(client);
    const first = await session.run(outliersTool, { device: "213", k: "3" });
    expect(first.id).toBe(1);
    expect((first.result as unknown[]).length).toBe(1);

    const refined = await session.refine(first.id, { k: "2" });
    expect(refined.id).toBe(2);
    expect(refined.params).toEqual({ device: "213", k: "2" });
    expect((refined.result as unknown[]).length).toBe(2);
    expect(session.entries).toHaveLength(2);
    expect(urls[1]).toContain("k=2");
    expect(urls[1]).not.toBe(urls[0]); // fresh API response, not a cache
  });

  it("replay reproduces every view against an unchanged store", async () => {
    const { client } = clientFor([
      { match: /k=3/, body: [{ counts: 50 }] },
      { match: /k=2/, body: [{ counts: 50 }, { counts: 31 }] },
    ]);
    const session = new QuerySession(client);
    await session.run(outliersTool, { device: "213", k: "3" });
    await session.refine(1, { k: "2" });
    const replayed = await session.replay();
    expect(replayed).toEqual(session.entries.map((e) => e.result));
  });

  it("refine of a missing entry fails loudly", async () => {
    const { client } = clientFor([]);
    const session = new QuerySession(client);
    await expect(session.refine(99, {})).rejects.toThrow("no session entry");
  });
});

describe("request-id application", () => {
  it("drops stale responses when requests resolve out of order", () => {
    const latest = new LatestWins<string>();
    let shown = "";
    const apply = (v: string) => {
      shown = v;
    };
    expect(latest.accept("view", 2, "new", apply)).toBe(true);
    expect(latest.accept("view", 1, "old", apply)).toBe(false); // stale
    expect(shown).toBe("new");
    expect(latest.accept("view", 3, "newest", apply)).toBe(true);
    expect(shown).toBe("newest");
  });

  it("tracks monotonically increasing request ids per client", async () => {
    const { client } = clientFor([{ match: "/api", body: {} }]);
    const a = await client.getJson("/api/devices");
    const b = await client.getJson("/api/devices");
    expect(b.requestId).toBeGreaterThan(a.requestId);
  });
});
