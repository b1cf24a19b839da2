/** Thin fetch wrapper around the documented API surface.
 *
 * Every request path goes through one of three builders and is appended
 * to a log, so tests can assert the explorer never invents endpoints.
 */

import { Kind, ErrorBody, ListResponse, EntityRecord, RootResponse } from "./types.js";
import { ViewState, filterExpr } from "./filters.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiClient {
  readonly requestLog: string[] = [];

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async request<T>(path: string): Promise<T> {
    this.requestLog.push(path);
    let response;
    try {
      response = await this.fetchImpl(this.baseUrl + path);
    } catch (err) {
      throw new ApiError(0, "network", String(err));
    }
    let body: unknown;
    try {
      body = await response.json();
    } catch (err) {
      throw new ApiError(response.status, "bad_payload", String(err));
    }
    if (!response.ok) {
      const error = body as ErrorBody;
      throw new ApiError(response.status, error.error ?? "error", error.message ?? "");
    }
    return body as T;
  }

  root(): Promise<RootResponse> {
    return this.request<RootResponse>("/");
  }

  list(state: ViewState, perPage: number): Promise<ListResponse> {
    const params = new URLSearchParams();
    const expr = filterExpr(state.chips);
    if (expr !== null) params.set("filter", expr);
    if (state.sort !== null) params.set("sort", state.sort);
    params.set("per-page", String(perPage));
    // "*" opens a fresh walk; the server hands back cursors only in
    // cursor mode, so the explorer always pages that way
    params.set("cursor", state.cursor ?? "*");
    return this.request<ListResponse>(`/${state.kind}?${params.toString()}`);
  }

  get(kind: Kind, id: string): Promise<EntityRecord> {
    return this.request<EntityRecord>(`/${kind}/${encodeURIComponent(id)}`);
  }
}
