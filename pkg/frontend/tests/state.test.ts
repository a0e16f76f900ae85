import { describe, expect, it } from "vitest";

import {
  decodeState,
  defaultState,
  encodeState,
  isValidRadius,
  METERS_PER_MILE,
  requestParams,
  type ViewState,
} from "../src/state.js";

describe("requestParams", () => {
  it("is a pure function of the state", () => {
    const state = defaultState("industrial_roads");
    expect(requestParams(state).toString()).toBe(requestParams(state).toString());
    expect(requestParams({ ...state }).toString()).toBe(requestParams(state).toString());
  });

  it("converts miles to meters exactly once, at the boundary", () => {
    const state = { ...defaultState("industrial_roads"), radiusMiles: 1 };
    expect(requestParams(state).get("radius_m")).toBe("1609.344");
    expect(requestParams({ ...state, radiusMiles: 0.5 }).get("radius_m")).toBe("804.672");
    expect(Number(requestParams({ ...state, radiusMiles: 2.3 }).get("radius_m"))).toBe(
      2.3 * METERS_PER_MILE,
    );
  });

  it("carries the full request tuple", () => {
    const state: ViewState = {
      layer: "tri_facilities",
      radiusMiles: 2,
      scale: "census_tract",
      method: "quantile",
      k: 3,
      zone: "0301",
      viewport: { lon: -87.6, lat: 41.8, zoom: 2 },
    };
    const params = requestParams(state);
    expect(params.get("layer")).toBe("tri_facilities");
    expect(params.get("scale")).toBe("census_tract");
    expect(params.get("method")).toBe("quantile");
    expect(params.get("k")).toBe("3");
    // zone and viewport are presentation state, not request parameters
    expect(params.has("zone")).toBe(false);
    expect(params.has("cx")).toBe(false);
  });
});

describe("URL round trip", () => {
  const fallback = defaultState("industrial_roads");

  it("restores every field exactly", () => {
    const state: ViewState = {
      layer: "tri_facilities",
      radiusMiles: 0.85,
      scale: "census_tract",
      method: "quantile",
      k: 5,
      zone: "0702",
      viewport: { lon: -87.6543210987, lat: 41.87654321, zoom: 4 },
    };
    expect(decodeState(encodeState(state), fallback)).toEqual(state);
  });

  it("round-trips randomized states bit-exactly", () => {
    for (let i = 0; i < 200; i += 1) {
      const state: ViewState = {
        layer: i % 2 ? "industrial_roads" : "tri_facilities",
        radiusMiles: Math.random() * 10 + 1e-6,
        scale: i % 3 ? "community_area" : "census_tract",
        method: i % 5 ? "natural_breaks" : "quantile",
        k: 1 + (i % 8),
        zone: i % 4 ? null : `Z${i}`,
        viewport:
          i % 2
            ? null
            : { lon: Math.random() * 360 - 180, lat: Math.random() * 180 - 90, zoom: 2 ** (i % 5) },
      };
      expect(decodeState(encodeState(state), fallback)).toEqual(state);
    }
  });

  it("falls back field-by-field on garbage input", () => {
    expect(decodeState("", fallback)).toEqual(fallback);
    expect(decodeState("r=-3&scale=planet&method=vibes&k=0.5&z=NaN", fallback)).toEqual(fallback);
    const partial = decodeState("k=6&scale=census_tract", fallback);
    expect(partial.k).toBe(6);
    expect(partial.scale).toBe("census_tract");
    expect(partial.layer).toBe(fallback.layer);
    expect(partial.radiusMiles).toBe(fallback.radiusMiles);
  });
});

describe("radius validation", () => {
  it("accepts positive finite miles only", () => {
    expect(isValidRadius(1)).toBe(true);
    expect(isValidRadius(0.01)).toBe(true);
    expect(isValidRadius(0)).toBe(false);
    expect(isValidRadius(-2)).toBe(false);
    expect(isValidRadius(NaN)).toBe(false);
    expect(isValidRadius(Infinity)).toBe(false);
  });
});
