/** Thin API client. Every call gets a monotonically increasing request id so
 * views can discard stale responses; an optional recorder captures request and
 * response pairs (the tests use it to prove displayed numbers come from the
 * wire, nothing else). */

import type { ApiError, ToolInfo, ToolManifest } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface RecordedCall {
  requestId: number;
  url: string;
  status: number;
  body: unknown;
}

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: ApiError,
  ) {
    super(`${detail.error}: ${detail.message}`);
  }
}

export class ApiClient {
  private nextRequestId = 1;
  readonly recorded: RecordedCall[] = [];

  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
    private readonly token: string | null = null,
    private readonly record: boolean = false,
  ) {}

  private headers(): Record<string, string> {
    return this.token ? { Authorization: `Bearer ${this.token}` } : {};
  }

  async getJson<T>(path: string): Promise<{ requestId: number; body: T }> {
    const requestId = this.nextRequestId++;
    const url = this.baseUrl + path;
    const response = await this.fetchFn(url, { headers: this.headers() });
    const body = await response.json();
    if (this.record) {
      this.recorded.push({ requestId, url, status: response.status, body });
    }
    if (!response.ok) {
      throw new ApiRequestError(response.status, body as ApiError);
    }
    return { requestId, body: body as T };
  }

  async manifest(): Promise<ToolManifest> {
    return (await this.getJson<ToolManifest>("/api/tools/manifest")).body;
  }

  /** Build the endpoint path for a tool + parameter values (strings, as typed). */
  toolPath(tool: ToolInfo, values: Record<string, string>): string {
    let path = tool.endpoint;
    const query: string[] = [];
    for (const param of tool.params) {
      const raw = values[param.name];
      if (raw === undefined || raw === "") {
        if (param.required && param.location === "query") {
          throw new Error(`missing required parameter ${param.name}`);
        }
        continue;
      }
      if (param.location === "path") {
        path = path.replace(`{${param.name}}`, encodeURIComponent(raw));
      } else {
        query.push(`${encodeURIComponent(param.name)}=${encodeURIComponent(raw)}`);
      }
    }
    if (path.includes("{")) {
      throw new Error(`unbound path parameter in ${tool.endpoint}`);
    }
    return query.length ? `${path}?${query.join("&")}` : path;
  }

  async callTool<T>(
    tool: ToolInfo,
    values: Record<string, string>,
  ): Promise<{ requestId: number; body: T }> {
    return this.getJson<T>(this.toolPath(tool, values));
  }

  async payload(assetId: string): Promise<ArrayBuffer> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/recordings/${encodeURIComponent(assetId)}/payload`,
      { headers: this.headers() },
    );
    if (!response.ok) {
      throw new Error(`payload fetch failed: ${response.status}`);
    }
    return response.arrayBuffer();
  }
}

/** Keeps only the newest response per key: stale request ids are dropped. */
export class LatestWins<T> {
  private latest = new Map<string, number>();

  accept(key: string, requestId: number, value: T, apply: (value: T) => void): boolean {
    const seen = this.latest.get(key) ?? 0;
    if (requestId < seen) {
      return false;
    }
    this.latest.set(key, requestId);
    apply(value);
    return true;
  }
}
