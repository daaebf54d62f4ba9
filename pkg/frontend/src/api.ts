/** Typed client over the classification service.
 *
 * The console performs no arithmetic of its own: every truth value,
 * witness, and formula it shows originates from one of these calls.
 * The fetch implementation is injectable so contract tests can replay
 * recorded responses.
 */

import {
  ApiError, ClassifyResponse, CorpusSummary, DecideResponse, QeResponse,
  ServiceError,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    readonly base: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(this.base + path, init);
    } catch (err) {
      throw new ServiceError(
        `service unreachable at ${this.base || "same origin"}`,
        0,
        { error: String(err) },
      );
    }
    const body = (await resp.json()) as T | ApiError;
    if (!resp.ok) {
      const detail = body as ApiError;
      throw new ServiceError(detail.error ?? `HTTP ${resp.status}`, resp.status, detail);
    }
    return body as T;
  }

  private post<T>(path: string, doc: unknown, signal?: AbortSignal): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
      signal,
    });
  }

  classify(body: { dsl: string; parent?: number }, signal?: AbortSignal) {
    return this.post<ClassifyResponse>("/api/classify", body, signal);
  }

  qe(body: { dsl: string; free: string[]; parent?: number }, signal?: AbortSignal) {
    return this.post<QeResponse>("/api/qe", body, signal);
  }

  decide(body: { smt2: string }, signal?: AbortSignal) {
    return this.post<DecideResponse>("/api/decide", body, signal);
  }

  corpus(): Promise<CorpusSummary> {
    return this.request<CorpusSummary>("/api/corpus");
  }

  corpusSource(id: string): Promise<{ id: string; source: string }> {
    return this.request<{ id: string; source: string }>(`/api/corpus/${id}`);
  }

  history(): Promise<{ steps: unknown[] }> {
    return this.request<{ steps: unknown[] }>("/api/history");
  }

  clearHistory(): Promise<{ steps: unknown[] }> {
    return this.request<{ steps: unknown[] }>("/api/history", { method: "DELETE" });
  }
}
