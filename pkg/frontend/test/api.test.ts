import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  ApiClient,
  ApiError,
  HttpResponse,
  LocalValidationError,
  StaleVersionError,
} from "../src/api.js";
import { Diagram, parseDocument } from "../src/ir.js";

const FIXTURES = join(__dirname, "fixtures");

function universityText(): string {
  return readFileSync(join(FIXTURES, "university.erd.json"), "utf-8");
}

function university(): Diagram {
  return parseDocument(universityText()).diagram;
}

interface Recorded {
  url: string;
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}

function fakeFetch(
  responses: Array<{ status: number; body: unknown }>,
): { fetch: (url: string, init?: Recorded) => Promise<HttpResponse>; calls: Recorded[] } {
  const calls: Recorded[] = [];
  const queue = [...responses];
  return {
    calls,
    fetch: (url, init) => {
      calls.push({ url, ...init });
      const next = queue.shift() ?? { status: 500, body: { detail: "exhausted" } };
      return Promise.resolve({
        status: next.status,
        json: () => Promise.resolve(next.body),
      });
    },
  };
}

describe("request plumbing", () => {
  it("saves a canonical document with the base version header", async () => {
    const { fetch, calls } = fakeFetch([{ status: 200, body: { id: "uni", version: 3 } }]);
    const client = new ApiClient("http://svc", fetch);
    const result = await client.putDiagram("uni", university(), {}, 2);
    expect(result).toEqual({ id: "uni", version: 3 });
    expect(calls).toHaveLength(1);
    expect(calls[0]!.url).toBe("http://svc/diagrams/uni");
    expect(calls[0]!.method).toBe("PUT");
    expect(calls[0]!.headers).toEqual({
      "Content-Type": "application/json",
      "X-Base-Version": "2",
    });
    expect(calls[0]!.body).toBe(universityText());
  });

  it("omits the version header when last write wins is intended", async () => {
    const { fetch, calls } = fakeFetch([{ status: 200, body: { id: "uni", version: 1 } }]);
    await new ApiClient("", fetch).putDiagram("uni", university());
    expect(calls[0]!.headers).toEqual({ "Content-Type": "application/json" });
  });

  it("never sends a document the validator rejects", async () => {
    const { fetch, calls } = fakeFetch([]);
    const broken = university();
    broken.relationships[0]!.participants = [];
    const client = new ApiClient("", fetch);
    let caught: unknown;
    try {
      await client.putDiagram("uni", broken);
    } catch (err) {
      caught = err;
    }
    expect(caught).toBeInstanceOf(LocalValidationError);
    expect((caught as LocalValidationError).violations[0]!.rule).toBe(
      "relationship-participants-few",
    );
    expect(calls).toHaveLength(0);
  });

  it("turns a stale write into StaleVersionError with the live version", async () => {
    const { fetch } = fakeFetch([
      { status: 409, body: { detail: { error: "stale version", current: 7 } } },
    ]);
    const client = new ApiClient("", fetch);
    let caught: unknown;
    try {
      await client.putDiagram("uni", university(), {}, 3);
    } catch (err) {
      caught = err;
    }
    expect(caught).toBeInstanceOf(StaleVersionError);
    expect((caught as StaleVersionError).current).toBe(7);
  });

  it("surfaces other failures as ApiError with the detail text", async () => {
    const { fetch } = fakeFetch([{ status: 400, body: { detail: "unknown dialect 'x'" } }]);
    let caught: unknown;
    try {
      await new ApiClient("", fetch).postModes("uni", {}, "x");
    } catch (err) {
      caught = err;
    }
    expect(caught).toBeInstanceOf(ApiError);
    expect((caught as ApiError).status).toBe(400);
    expect((caught as ApiError).message).toBe("unknown dialect 'x'");
  });

  it("escapes diagram ids in URLs", async () => {
    const { fetch, calls } = fakeFetch([{ status: 404, body: { detail: "no diagram" } }]);
    await new ApiClient("", fetch).getDiagram("a b").catch(() => undefined);
    expect(calls[0]!.url).toBe("/diagrams/a%20b");
  });
});

describe("endpoint shapes", () => {
  it("lists diagrams and fetches one", async () => {
    const doc = JSON.parse(universityText()) as unknown;
    const { fetch, calls } = fakeFetch([
      { status: 200, body: { diagrams: [{ id: "uni", version: 2 }] } },
      { status: 200, body: { id: "uni", version: 2, diagram: doc } },
    ]);
    const client = new ApiClient("", fetch);
    expect(await client.listDiagrams()).toEqual([{ id: "uni", version: 2 }]);
    const fetched = await client.getDiagram("uni");
    expect(fetched.version).toBe(2);
    expect(calls.map((c) => c.method)).toEqual(["GET", "GET"]);
    expect(calls.map((c) => c.url)).toEqual(["/diagrams", "/diagrams/uni"]);
  });

  it("posts walk config and dialect for modes", async () => {
    const { fetch, calls } = fakeFetch([
      {
        status: 200,
        body: { id: "uni", version: 1, dialect: "aleph", modes: "x", warnings: [] },
      },
    ]);
    await new ApiClient("", fetch).postModes(
      "uni",
      { strategy: "shortest-all", max_depth: 4 },
      "aleph",
    );
    expect(calls[0]!.url).toBe("/diagrams/uni/modes");
    expect(JSON.parse(calls[0]!.body!)).toEqual({
      config: { strategy: "shortest-all", max_depth: 4 },
      dialect: "aleph",
    });
  });

  it("passes the mode text through byte for byte", async () => {
    const golden = readFileSync(join(FIXTURES, "university.modes.golden"), "utf-8");
    const { fetch } = fakeFetch([
      {
        status: 200,
        body: { id: "uni", version: 1, dialect: "generic", modes: golden, warnings: [] },
      },
    ]);
    const result = await new ApiClient("", fetch).postModes("uni");
    expect(result.modes).toBe(golden);
    expect(result.warnings).toEqual([]);
  });

  it("sends clause-space bounds only when set", async () => {
    const { fetch, calls } = fakeFetch([
      { status: 200, body: { id: "u", version: 1, report: {} } },
      { status: 200, body: { id: "u", version: 1, report: {} } },
    ]);
    const client = new ApiClient("", fetch);
    await client.postClausespace("u", { strategy: "all" }, { maxLen: 3, cap: 100 });
    await client.postClausespace("u");
    expect(JSON.parse(calls[0]!.body!)).toEqual({
      config: { strategy: "all" },
      max_len: 3,
      cap: 100,
    });
    expect(JSON.parse(calls[1]!.body!)).toEqual({ config: {} });
  });

  it("groups path results per important feature", async () => {
    const { fetch } = fakeFetch([
      {
        status: 200,
        body: {
          id: "uni",
          version: 1,
          results: [
            {
              feature: { owner: "Takes", name: "Grade" },
              paths: [
                {
                  steps: ["Professor", "Advises", "Student", "Takes"],
                  relations: 2,
                  endpoint: { owner: "Takes", name: "Grade" },
                  rendered: "Professor -[Advises]-> Student -[Takes]",
                },
              ],
            },
          ],
        },
      },
    ]);
    const result = await new ApiClient("", fetch).postPaths("uni", { strategy: "shortest" });
    expect(result.results[0]!.paths[0]!.steps).toEqual([
      "Professor",
      "Advises",
      "Student",
      "Takes",
    ]);
  });
});
