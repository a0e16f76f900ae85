/**
 * View state: everything the dashboard needs to reproduce what the user
 * is looking at. The state → request mapping is a pure function, and the
 * state survives a round trip through the URL query string exactly, so
 * views are shareable and back/forward navigation just works.
 */

import type { BreakMethod, ZoneScale } from "./types.js";

/** The engine API works in meters; the UI takes miles. */
export const METERS_PER_MILE = 1609.344;

export interface Viewport {
  lon: number;
  lat: number;
  /** 1 = fit the whole surface; doubles per zoom step. */
  zoom: number;
}

export interface ViewState {
  layer: string;
  radiusMiles: number;
  scale: ZoneScale;
  method: BreakMethod;
  k: number;
  /** Zone open in the detail panel, if any. */
  zone: string | null;
  /** null = fit the data extent. */
  viewport: Viewport | null;
}

const SCALES: ZoneScale[] = ["community_area", "census_tract"];
const METHODS: BreakMethod[] = ["natural_breaks", "quantile"];

export function defaultState(layer: string): ViewState {
  return {
    layer,
    radiusMiles: 1,
    scale: "community_area",
    method: "natural_breaks",
    k: 4,
    zone: null,
    viewport: null,
  };
}

export function isValidRadius(miles: number): boolean {
  return Number.isFinite(miles) && miles > 0;
}

/**
 * The query parameters for a burden/schools request. Miles are converted
 * to meters here and nowhere else, so every consumer sends the same
 * radius for the same state.
 */
export function requestParams(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  params.set("layer", state.layer);
  params.set("radius_m", String(state.radiusMiles * METERS_PER_MILE));
  params.set("scale", state.scale);
  params.set("method", state.method);
  params.set("k", String(state.k));
  return params;
}

/** Query string (no leading "?") encoding the full view state. */
export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  params.set("layer", state.layer);
  params.set("r", String(state.radiusMiles));
  params.set("scale", state.scale);
  params.set("method", state.method);
  params.set("k", String(state.k));
  if (state.zone !== null) {
    params.set("zone", state.zone);
  }
  if (state.viewport !== null) {
    params.set("cx", String(state.viewport.lon));
    params.set("cy", String(state.viewport.lat));
    params.set("z", String(state.viewport.zoom));
  }
  return params.toString();
}

/**
 * Decode a query string back into a ViewState. Anything missing or
 * malformed falls back to the corresponding field of `fallback`, so a
 * truncated or hand-edited URL still yields a valid state.
 */
export function decodeState(query: string, fallback: ViewState): ViewState {
  const params = new URLSearchParams(query);
  const state: ViewState = { ...fallback, zone: null, viewport: null };

  const layer = params.get("layer");
  if (layer) state.layer = layer;

  const r = Number(params.get("r"));
  if (isValidRadius(r)) state.radiusMiles = r;

  const scale = params.get("scale") as ZoneScale | null;
  if (scale && SCALES.includes(scale)) state.scale = scale;

  const method = params.get("method") as BreakMethod | null;
  if (method && METHODS.includes(method)) state.method = method;

  const k = Number(params.get("k"));
  if (Number.isInteger(k) && k >= 1) state.k = k;

  const zone = params.get("zone");
  if (zone) state.zone = zone;

  const cx = Number(params.get("cx"));
  const cy = Number(params.get("cy"));
  const z = Number(params.get("z"));
  if (Number.isFinite(cx) && Number.isFinite(cy) && Number.isFinite(z) && z > 0) {
    state.viewport = { lon: cx, lat: cy, zoom: z };
  }

  return state;
}
