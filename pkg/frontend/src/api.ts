/**
 * Typed client for the diagram service.
 *
 * Documents are validated locally before every PUT, so the server never
 * sees an IR this editor would itself flag. Optimistic concurrency rides
 * on the X-Base-Version header: a stale write surfaces as
 * StaleVersionError carrying the version the server holds now.
 */

import { Diagram, Violation, serializeDocument, validateDiagram } from "./ir.js";
import { Layout } from "./state.js";

export interface HttpResponse {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<HttpResponse>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: unknown,
  ) {
    super(typeof detail === "string" ? detail : `request failed (${status})`);
    this.name = "ApiError";
  }
}

export class StaleVersionError extends Error {
  constructor(readonly current: number) {
    super(`the diagram changed on the server (now at version ${current})`);
    this.name = "StaleVersionError";
  }
}

export class LocalValidationError extends Error {
  constructor(readonly violations: Violation[]) {
    super(violations.map((v) => `${v.rule} (${v.element})`).join("; "));
    this.name = "LocalValidationError";
  }
}

export interface WireConfig {
  strategy?: string;
  max_depth?: number;
  seed?: number;
  num_walks?: number;
}

export type WireRef = Record<string, string>;

export interface DiagramRow {
  id: string;
  version: number;
}

export interface DiagramResponse {
  id: string;
  version: number;
  diagram: unknown;
}

export interface PathRow {
  steps: string[];
  relations: number;
  endpoint: WireRef;
  rendered: string;
}

export interface PathsGroup {
  feature: WireRef | null;
  paths: PathRow[];
}

export interface PathsResponse {
  id: string;
  version: number;
  results: PathsGroup[];
}

export interface ModesResponse {
  id: string;
  version: number;
  dialect: string;
  modes: string;
  warnings: string[];
}

export interface ClausespaceResponse {
  id: string;
  version: number;
  report: {
    max_len: number;
    total: number;
    truncated: boolean;
    counts_by_length: Record<string, number>;
  };
}

async function detailOf(response: HttpResponse): Promise<unknown> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    return body && typeof body === "object" && "detail" in body ? body.detail : body;
  } catch {
    return null;
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = globalThis.fetch as unknown as FetchLike,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    options: { body?: string; headers?: Record<string, string> } = {},
  ): Promise<T> {
    const headers: Record<string, string> = { ...options.headers };
    if (options.body !== undefined) {
      headers["Content-Type"] = "application/json";
    }
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: options.body,
    });
    if (response.status >= 200 && response.status < 300) {
      return (await response.json()) as T;
    }
    const detail = await detailOf(response);
    if (response.status === 409 && typeof detail === "object" && detail !== null) {
      const { current } = detail as { current?: unknown };
      if (typeof current === "number") {
        throw new StaleVersionError(current);
      }
    }
    throw new ApiError(response.status, detail);
  }

  health(): Promise<{ status: string }> {
    return this.request("GET", "/health");
  }

  async listDiagrams(): Promise<DiagramRow[]> {
    const body = await this.request<{ diagrams: DiagramRow[] }>("GET", "/diagrams");
    return body.diagrams;
  }

  getDiagram(id: string): Promise<DiagramResponse> {
    return this.request("GET", `/diagrams/${encodeURIComponent(id)}`);
  }

  /**
   * Store a document. Throws LocalValidationError instead of sending
   * anything when the diagram breaks a structural rule. `baseVersion`
   * opts into optimistic concurrency; omitting it means last write wins.
   */
  putDiagram(
    id: string,
    diagram: Diagram,
    layout: Layout = {},
    baseVersion?: number,
  ): Promise<{ id: string; version: number }> {
    const violations = validateDiagram(diagram);
    if (violations.length > 0) {
      throw new LocalValidationError(violations);
    }
    const headers: Record<string, string> = {};
    if (baseVersion !== undefined) {
      headers["X-Base-Version"] = String(baseVersion);
    }
    return this.request("PUT", `/diagrams/${encodeURIComponent(id)}`, {
      body: serializeDocument(diagram, layout),
      headers,
    });
  }

  postPaths(id: string, config: WireConfig = {}): Promise<PathsResponse> {
    return this.request("POST", `/diagrams/${encodeURIComponent(id)}/paths`, {
      body: JSON.stringify({ config }),
    });
  }

  postModes(
    id: string,
    config: WireConfig = {},
    dialect: string = "generic",
  ): Promise<ModesResponse> {
    return this.request("POST", `/diagrams/${encodeURIComponent(id)}/modes`, {
      body: JSON.stringify({ config, dialect }),
    });
  }

  postClausespace(
    id: string,
    config: WireConfig = {},
    options: { maxLen?: number; cap?: number } = {},
  ): Promise<ClausespaceResponse> {
    const body: Record<string, unknown> = { config };
    if (options.maxLen !== undefined) body.max_len = options.maxLen;
    if (options.cap !== undefined) body.cap = options.cap;
    return this.request("POST", `/diagrams/${encodeURIComponent(id)}/clausespace`, {
      body: JSON.stringify(body),
    });
  }
}
