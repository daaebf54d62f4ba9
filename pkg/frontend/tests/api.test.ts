/** The client sends exactly the documented requests and surfaces errors. */

import { describe, expect, it } from "vitest";

import { ApiClient, FetchLike } from "../src/api.js";
import { ServiceError } from "../src/types.js";
import { RecordedExchange, loadFixture } from "./fixtures.js";

const marshall = loadFixture<RecordedExchange>("classify_marshall");
const qe = loadFixture<RecordedExchange>("qe_0013");
const parseError = loadFixture<RecordedExchange>("classify_parse_error");

function replay(expected: {
  path: string; method: string; body?: unknown; status?: number; response: unknown;
}): FetchLike {
  return async (url, init) => {
    expect(url).toBe(expected.path);
    expect(init?.method ?? "GET").toBe(expected.method);
    if (expected.body !== undefined) {
      expect(JSON.parse(String(init?.body))).toEqual(expected.body);
    }
    const status = expected.status ?? 200;
    return new Response(JSON.stringify(expected.response), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
}

describe("ApiClient", () => {
  it("posts classification requests and returns the document unchanged", async () => {
    const api = new ApiClient("", replay({
      path: "/api/classify", method: "POST",
      body: marshall.request, response: marshall.response,
    }));
    const doc = await api.classify(marshall.request);
    expect(doc).toEqual(marshall.response);
  });

  it("posts qe requests with the free-variable list", async () => {
    const api = new ApiClient("", replay({
      path: "/api/qe", method: "POST", body: qe.request, response: qe.response,
    }));
    const doc = await api.qe(qe.request);
    expect(doc.equivalence_checked).toBe(true);
    expect(doc.formula_dsl).toBe(qe.response.formula_dsl);
  });

  it("raises ServiceError with the parse position on HTTP 400", async () => {
    const api = new ApiClient("", replay({
      path: "/api/classify", method: "POST",
      status: 400, response: parseError.response,
    }));
    try {
      await api.classify(parseError.request);
      expect.unreachable("should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(ServiceError);
      const se = err as ServiceError;
      expect(se.status).toBe(400);
      expect(se.detail.line).toBe(parseError.response.line);
    }
  });

  it("maps network failures to an unreachable-service error", async () => {
    const api = new ApiClient("http://127.0.0.1:1", async () => {
      throw new TypeError("fetch failed");
    });
    await expect(api.corpus()).rejects.toMatchObject({ status: 0 });
  });

  it("clears history with DELETE", async () => {
    const api = new ApiClient("", replay({
      path: "/api/history", method: "DELETE", response: { steps: [] },
    }));
    const doc = await api.clearHistory();
    expect(doc.steps).toEqual([]);
  });
});
