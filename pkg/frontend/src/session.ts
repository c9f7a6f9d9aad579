/** Query session: the ordered history of (tool, params, result) plus the
 * refine loop. Replaying the history against an unchanged store reproduces
 * every view. */

import type { ApiClient } from "./api.js";
import type { ToolInfo } from "./types.js";

export interface SessionEntry {
  id: number;
  tool: ToolInfo;
  params: Record<string, string>;
  requestId: number;
  result: unknown;
  at: string;
}

export class QuerySession {
  private nextId = 1;
  readonly entries: SessionEntry[] = [];

  constructor(private readonly client: ApiClient) {}

  async run(tool: ToolInfo, params: Record<string, string>): Promise<SessionEntry> {
    const { requestId, body } = await this.client.callTool(tool, params);
    const entry: SessionEntry = {
      id: this.nextId++,
      tool,
      params: { ...params },
      requestId,
      result: body,
      at: new Date().toISOString(),
    };
    this.entries.push(entry);
    return entry;
  }

  /** Re-run an earlier query with some parameters changed; appends, never edits. */
  async refine(
    entryId: number,
    changes: Record<string, string>,
  ): Promise<SessionEntry> {
    const base = this.entries.find((e) => e.id === entryId);
    if (!base) {
      throw new Error(`no session entry ${entryId}`);
    }
    return this.run(base.tool, { ...base.params, ...changes });
  }

  /** Replay the whole history in order; returns the fresh results. */
  async replay(client?: ApiClient): Promise<unknown[]> {
    const target = client ?? this.client;
    const results: unknown[] = [];
    for (const entry of this.entries) {
      const { body } = await target.callTool(entry.tool, entry.params);
      results.push(body);
    }
    return results;
  }
}
