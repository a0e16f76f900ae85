/**
 * Thin client for the read-only burden API plus the request-sequencing
 * helper the app uses to drop stale responses.
 */

import type { ApiErrorBody, BurdenSurface, LayersDoc, SchoolsDoc } from "./types.js";
import type { ViewState } from "./state.js";
import { requestParams } from "./state.js";

export type Fetcher = (url: string) => Promise<Response>;

/** An error response the engine produced deliberately (4xx/5xx JSON body). */
export class ApiRequestError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.code = body.code;
    this.status = status;
  }
}

async function getJson<T>(fetcher: Fetcher, url: string): Promise<T> {
  const response = await fetcher(url);
  if (!response.ok) {
    let body: ApiErrorBody;
    try {
      body = (await response.json()) as ApiErrorBody;
    } catch {
      throw new Error(`request failed with status ${response.status}`);
    }
    throw new ApiRequestError(response.status, body);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  private readonly base: string;
  private readonly fetcher: Fetcher;

  /**
   * @param base origin prefix, e.g. "http://127.0.0.1:8080"; empty string
   *   for same-origin use when the dashboard is served by the engine.
   */
  constructor(base = "", fetcher: Fetcher = (url) => fetch(url)) {
    this.base = base.replace(/\/$/, "");
    this.fetcher = fetcher;
  }

  layers(): Promise<LayersDoc> {
    return getJson(this.fetcher, `${this.base}/api/layers`);
  }

  burden(state: ViewState): Promise<BurdenSurface> {
    return getJson(this.fetcher, `${this.base}/api/burden?${requestParams(state)}`);
  }

  schools(state: ViewState): Promise<SchoolsDoc> {
    return getJson(this.fetcher, `${this.base}/api/schools?${requestParams(state)}`);
  }
}

/**
 * Last-write-wins gate for in-flight requests. Each request takes a
 * ticket; when a response lands, it is applied only if no newer ticket
 * has been issued since. Responses arriving out of order are discarded.
 */
export class LatestGate {
  private seq = 0;

  issue(): number {
    this.seq += 1;
    return this.seq;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.seq;
  }
}
