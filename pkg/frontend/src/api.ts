/** Typed client for the review server's JSON API. */

import type { AnnotationDoc, ProgressDoc, RecipeSummary, Score } from "./types.js";

/** Error raised for any non-2xx API response, carrying the server's message. */
export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

/** Narrow fetch signature so tests can substitute a fake transport. */
export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ReviewApi {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  listRecipes(): Promise<RecipeSummary[]> {
    return this.request<RecipeSummary[]>("GET", "/api/recipes");
  }

  getProgress(recipeId: string): Promise<ProgressDoc> {
    return this.request<ProgressDoc>("GET", recipePath(recipeId, "progress"));
  }

  getAnnotations(recipeId: string): Promise<AnnotationDoc> {
    return this.request<AnnotationDoc>("GET", recipePath(recipeId, "annotations"));
  }

  /** Replace the stored scores for a recipe; resolves to the saved document. */
  putAnnotations(recipeId: string, scores: Record<string, Score>): Promise<AnnotationDoc> {
    return this.request<AnnotationDoc>("PUT", recipePath(recipeId, "annotations"), { scores });
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const text = await response.text();
    let payload: unknown = null;
    if (text) {
      try {
        payload = JSON.parse(text);
      } catch {
        payload = null;
      }
    }
    if (!response.ok) {
      throw new ApiError(response.status, errorMessage(payload, response.status));
    }
    return payload as T;
  }
}

function recipePath(recipeId: string, resource: string): string {
  return `/api/recipes/${encodeURIComponent(recipeId)}/${resource}`;
}

function errorMessage(payload: unknown, status: number): string {
  if (
    payload !== null &&
    typeof payload === "object" &&
    "error" in payload &&
    typeof (payload as { error: unknown }).error === "string"
  ) {
    return (payload as { error: string }).error;
  }
  return `request failed with status ${status}`;
}
