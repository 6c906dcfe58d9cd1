// HTTP client for the composition service. All numbers in responses are
// already rendered server-side; this module only moves JSON around.
// Identical concurrent requests share one in-flight fetch.

import type {
  ApiError as ApiErrorPayload,
  ComparisonTable,
  CompositionReport,
  Recipe,
  RecommendationResponse,
  ReviewItems,
  SearchResponse,
  UserProfile,
} from "./api-types.js";

export class ApiError extends Error {
  code: string;
  details: Record<string, unknown>;

  constructor(payload: ApiErrorPayload) {
    super(payload.message);
    this.code = payload.code;
    this.details = payload.details ?? {};
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private baseUrl: string;
  private fetchImpl: FetchLike;
  private inflight = new Map<string, Promise<unknown>>();

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const key = `${method} ${path} ${body === undefined ? "" : JSON.stringify(body)}`;
    const existing = this.inflight.get(key);
    if (existing) {
      return existing as Promise<T>;
    }
    const run = (async () => {
      const init: RequestInit = { method };
      if (body !== undefined) {
        init.headers = { "Content-Type": "application/json" };
        init.body = JSON.stringify(body);
      }
      const response = await this.fetchImpl(this.baseUrl + path, init);
      const payload = await response.json();
      if (!response.ok) {
        throw new ApiError(payload as ApiErrorPayload);
      }
      return payload as T;
    })();
    this.inflight.set(key, run);
    const cleanup = () => void this.inflight.delete(key);
    run.then(cleanup, cleanup); // settle-only side chain; rejection handled by callers
    return run;
  }

  search(query: string, limit = 10): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: query, limit: String(limit) });
    return this.request("GET", `/search?${params}`);
  }

  recipe(id: string): Promise<Recipe> {
    return this.request("GET", `/recipes/${encodeURIComponent(id)}`);
  }

  composition(id: string): Promise<CompositionReport> {
    return this.request("GET", `/recipes/${encodeURIComponent(id)}/composition`);
  }

  compare(dish: string, nutrient: string, order: "asc" | "desc"): Promise<ComparisonTable> {
    const params = new URLSearchParams({ dish, nutrient, order });
    return this.request("GET", `/compare?${params}`);
  }

  recommendations(profile: UserProfile): Promise<RecommendationResponse> {
    return this.request("POST", "/recommendations", profile);
  }

  analyze(lines: string[], servings?: number): Promise<CompositionReport> {
    const body: Record<string, unknown> = { lines };
    if (servings !== undefined) {
      body.servings = servings;
    }
    return this.request("POST", "/analyze", body);
  }

  reviewList(status?: string): Promise<ReviewItems> {
    const suffix = status ? `?${new URLSearchParams({ status })}` : "";
    return this.request("GET", `/review${suffix}`);
  }
}
