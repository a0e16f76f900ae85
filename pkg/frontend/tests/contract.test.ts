/**
 * Contract tests against the live fixture-backed engine service: the
 * DOM must be a faithful projection of the API payloads.
 */

import { describe, expect, inject, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { classColor } from "../src/color.js";
import { formatValue } from "../src/format.js";
import type { BurdenSurface } from "../src/types.js";
import { FakeWindow, loadAppDom } from "./helpers.js";

const base = inject("baseUrl");

function newApp(search = "") {
  const doc = loadAppDom();
  const win = new FakeWindow(search);
  const app = new App(doc, new ApiClient(base), win);
  return { doc, win, app };
}

async function fetchJson<T>(path: string): Promise<T> {
  const response = await fetch(`${base}${path}`);
  if (!response.ok) throw new Error(`${path} -> ${response.status}`);
  return (await response.json()) as T;
}

function zonePaths(doc: Document): SVGPathElement[] {
  return Array.from(doc.querySelectorAll<SVGPathElement>("#map path[data-zone]"));
}

function setControl(doc: Document, selector: string, value: string): void {
  const el = doc.querySelector(selector) as HTMLSelectElement | HTMLInputElement;
  el.value = value;
  el.dispatchEvent(new Event("change", { bubbles: true }));
}

function checkRadio(doc: Document, name: string, value: string): void {
  const input = doc.querySelector(
    `input[name="${name}"][value="${value}"]`,
  ) as HTMLInputElement;
  input.checked = true;
  input.dispatchEvent(new Event("change", { bubbles: true }));
}

function clickZone(doc: Document, zoneId: string): void {
  const path = doc.querySelector(`#map path[data-zone="${zoneId}"]`)!;
  path.dispatchEvent(new MouseEvent("click", { bubbles: true }));
}

describe("choropleth rendering", () => {
  it("renders every zone with exactly the class the payload reports", async () => {
    const { doc, app } = newApp();
    await app.boot();

    const surface = await fetchJson<BurdenSurface>(
      "/api/burden?layer=industrial_roads&radius_m=1609.344&scale=community_area&method=natural_breaks&k=4",
    );
    const paths = zonePaths(doc);
    expect(paths.length).toBe(surface.features.length);

    for (const feature of surface.features) {
      const p = feature.properties;
      const path = doc.querySelector(`#map path[data-zone="${p.zone_id}"]`)!;
      expect(path.getAttribute("data-class-index")).toBe(String(p.class_index));
      expect(path.getAttribute("data-cpb")).toBe(String(p.cpb));
      if (p.n_schools > 0) {
        expect(path.getAttribute("fill")).toBe(classColor(p.class_index, 4));
      } else {
        // zero-school zones are hatched, not ramp-colored
        expect(path.getAttribute("fill")).toMatch(/^url\(#/);
      }
    }
  });

  it("shows k swatches and k-1 break values in the legend", async () => {
    const { doc, app } = newApp();
    await app.boot();

    const surface = await fetchJson<BurdenSurface>(
      "/api/burden?layer=industrial_roads&radius_m=1609.344&scale=community_area&method=natural_breaks&k=4",
    );
    expect(doc.querySelectorAll("#legend li").length).toBe(4);
    expect(surface.meta.break_set.breaks.length).toBe(3);
    const legendText = doc.querySelector("#legend")!.textContent!;
    for (const breakValue of surface.meta.break_set.breaks) {
      expect(legendText).toContain(formatValue(breakValue));
    }
  });

  it("renders a single swatch and no break values when k is 1", async () => {
    const { doc, app } = newApp();
    await app.boot();
    setControl(doc, "#k", "1");
    await app.settle();

    const items = doc.querySelectorAll("#legend li");
    expect(items.length).toBe(1);
    expect(items[0]!.textContent).toBe("All");
  });

  it("changes the zone count when toggling the aggregation scale", async () => {
    const { doc, app } = newApp();
    await app.boot();
    expect(zonePaths(doc).length).toBe(8);

    checkRadio(doc, "scale", "census_tract");
    await app.settle();
    expect(zonePaths(doc).length).toBe(20);
  });
});

describe("classification method toggle", () => {
  it("changes only classes; cpb values and tooltips stay identical", async () => {
    const { doc, app } = newApp();
    await app.boot();

    const snapshot = () =>
      new Map(
        zonePaths(doc).map((path) => [
          path.getAttribute("data-zone")!,
          {
            cpb: path.getAttribute("data-cpb")!,
            classIndex: path.getAttribute("data-class-index")!,
            tooltip: path.querySelector("title")!.textContent!,
          },
        ]),
      );

    const before = snapshot();
    checkRadio(doc, "method", "quantile");
    await app.settle();
    const after = snapshot();

    expect([...after.keys()].sort()).toEqual([...before.keys()].sort());
    let classChanged = false;
    for (const [zoneId, entry] of after) {
      const previous = before.get(zoneId)!;
      expect(entry.cpb).toBe(previous.cpb);
      expect(entry.tooltip).toBe(previous.tooltip);
      if (entry.classIndex !== previous.classIndex) classChanged = true;
    }
    expect(classChanged).toBe(true);
  });
});

describe("view state in the URL", () => {
  it("restores a changed view exactly from its query string", async () => {
    const a = newApp();
    await a.app.boot();

    setControl(a.doc, "#layer", "tri_facilities");
    setControl(a.doc, "#radius", "0.5");
    checkRadio(a.doc, "method", "quantile");
    checkRadio(a.doc, "scale", "census_tract");
    setControl(a.doc, "#k", "3");
    await a.app.settle();
    (a.doc.querySelector("#zoom-in") as HTMLButtonElement).click();
    clickZone(a.doc, "0301");
    await a.app.settle();

    const state = a.app.getState();
    expect(state).toMatchObject({
      layer: "tri_facilities",
      radiusMiles: 0.5,
      scale: "census_tract",
      method: "quantile",
      k: 3,
      zone: "0301",
    });
    expect(state.viewport?.zoom).toBe(2);

    const b = newApp(a.win.location.search);
    await b.app.boot();
    expect(b.app.getState()).toEqual(state);
    // the restored view fetched and rendered the same surface
    expect(zonePaths(b.doc).length).toBe(20);
    expect(b.doc.querySelector("#panel dd[data-cpb]")).not.toBeNull();
  });

  it("replays back/forward navigation from the history stack", async () => {
    const a = newApp();
    await a.app.boot();

    checkRadio(a.doc, "scale", "census_tract");
    await a.app.settle();
    clickZone(a.doc, "0301");
    await a.app.settle();
    expect(a.app.getState().zone).toBe("0301");

    a.win.back();
    await a.app.settle();
    expect(a.app.getState().zone).toBeNull();
    expect(a.app.getState().scale).toBe("census_tract");

    a.win.forward();
    await a.app.settle();
    expect(a.app.getState().zone).toBe("0301");

    a.win.back();
    a.win.back();
    await a.app.settle();
    expect(a.app.getState().scale).toBe("community_area");
    expect(zonePaths(a.doc).length).toBe(8);
  });
});

describe("zone detail panel", () => {
  it("lists the zone's schools and their scores sum to the displayed cpb", async () => {
    const { doc, app } = newApp();
    await app.boot();
    clickZone(doc, "03");
    await app.settle();

    const cpbCell = doc.querySelector("#panel dd[data-cpb]")!;
    const cpb = Number(cpbCell.getAttribute("data-cpb"));
    expect(cpbCell.textContent).toBe(formatValue(cpb));
    // the displayed cpb is exactly the zone's map value
    expect(String(cpb)).toBe(
      doc.querySelector('#map path[data-zone="03"]')!.getAttribute("data-cpb"),
    );

    const scoreCells = Array.from(doc.querySelectorAll("#panel td[data-score]"));
    expect(scoreCells.length).toBe(10);
    const sum = scoreCells.reduce((acc, td) => acc + Number(td.getAttribute("data-score")), 0);
    expect(Math.abs(sum - cpb)).toBeLessThanOrEqual(1e-9 * Math.max(1, cpb));
  });

  it("marks excluded schools and keeps them out of the score column", async () => {
    const { doc, app } = newApp();
    await app.boot();
    clickZone(doc, "01");
    await app.settle();

    const rows = doc.querySelectorAll("#panel tbody tr");
    expect(rows.length).toBe(6);
    expect(doc.querySelectorAll("#panel tbody tr.excluded").length).toBe(1);
    const scoreCells = Array.from(doc.querySelectorAll("#panel td[data-score]"));
    expect(scoreCells.length).toBe(5);
    const sum = scoreCells.reduce((acc, td) => acc + Number(td.getAttribute("data-score")), 0);
    expect(sum).toBe(0);
    expect(Number(doc.querySelector("#panel dd[data-cpb]")!.getAttribute("data-cpb"))).toBe(0);
  });

  it("shows an explicit empty state for a zone with no schools", async () => {
    const { doc, app } = newApp();
    await app.boot();
    clickZone(doc, "08");
    await app.settle();

    const panel = doc.querySelector("#panel")!;
    expect(panel.textContent).toContain("No schools in this zone.");
    expect(panel.querySelector("dd[data-cpb]")!.textContent).toBe("0");
  });
});

describe("error handling", () => {
  it("surfaces an API error in the banner and keeps the previous surface", async () => {
    const { doc, app } = newApp();
    await app.boot();
    const before = zonePaths(doc).map((p) => p.getAttribute("data-cpb"));

    setControl(doc, "#k", "8"); // more classes than distinct zone values
    await app.settle();

    const banner = doc.querySelector("#banner")!;
    expect(banner.hasAttribute("hidden")).toBe(false);
    expect(banner.textContent).toContain("at most");
    expect(zonePaths(doc).map((p) => p.getAttribute("data-cpb"))).toEqual(before);

    setControl(doc, "#k", "4");
    await app.settle();
    expect(doc.querySelector("#banner")!.hasAttribute("hidden")).toBe(true);
  });
});
