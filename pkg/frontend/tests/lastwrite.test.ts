/**
 * Request sequencing with a stubbed fetch: responses resolving out of
 * order must never clobber a newer view, and invalid radius input must
 * not produce a request at all.
 */

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import type { LayersDoc } from "../src/types.js";
import { FakeWindow, jsonResponse, loadAppDom, syntheticSurface } from "./helpers.js";

const LAYERS_DOC: LayersDoc = {
  engine_version: "0.1.0",
  layers: [
    { id: "industrial_roads", title: "Heavy traffic roads", kind: "line", exposure_unit: "kilometers", n_features: 10 },
  ],
  zone_sets: [
    { scale: "community_area", n_zones: 8 },
    { scale: "census_tract", n_zones: 20 },
  ],
  n_schools: 40,
};

interface Pending {
  url: string;
  resolve: (r: Response) => void;
}

function deferredClient(): { client: ApiClient; pending: Pending[]; urls: string[] } {
  const pending: Pending[] = [];
  const urls: string[] = [];
  const client = new ApiClient("", (url) => {
    urls.push(url);
    if (url.includes("/api/layers")) return Promise.resolve(jsonResponse(LAYERS_DOC));
    return new Promise<Response>((resolve) => pending.push({ url, resolve }));
  });
  return { client, pending, urls };
}

function setControl(doc: Document, selector: string, value: string): void {
  const el = doc.querySelector(selector) as HTMLSelectElement | HTMLInputElement;
  el.value = value;
  el.dispatchEvent(new Event("change", { bubbles: true }));
}

/** boot() issues its burden request asynchronously; wait for it to appear. */
async function waitFor(condition: () => boolean): Promise<void> {
  const deadline = Date.now() + 2000;
  while (!condition()) {
    if (Date.now() > deadline) throw new Error("condition never became true");
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

describe("last-write-wins request handling", () => {
  it("discards a stale response that resolves after a newer one", async () => {
    const doc = loadAppDom();
    const { client, pending } = deferredClient();
    const app = new App(doc, client, new FakeWindow());

    const booted = app.boot();
    await waitFor(() => pending.length === 1);
    pending[0]!.resolve(jsonResponse(syntheticSurface(1.0)));
    await booted;

    setControl(doc, "#k", "2"); // request #2
    setControl(doc, "#k", "3"); // request #3 supersedes #2
    expect(pending.length).toBe(3);
    expect(pending[1]!.url).toContain("k=2");
    expect(pending[2]!.url).toContain("k=3");

    // newest request lands first… (settle() would block on the still-open
    // request #2, so wait for the render instead)
    pending[2]!.resolve(jsonResponse(syntheticSurface(3.0)));
    await waitFor(() => doc.querySelector(".zone")?.getAttribute("data-cpb") === "3");
    // …then the stale one limps in
    pending[1]!.resolve(jsonResponse(syntheticSurface(2.0)));
    await app.settle();

    const zone = doc.querySelector(".zone") as SVGPathElement;
    expect(zone.getAttribute("data-cpb")).toBe("3");
  });

  it("applies responses normally when they arrive in order", async () => {
    const doc = loadAppDom();
    const { client, pending } = deferredClient();
    const app = new App(doc, client, new FakeWindow());

    const booted = app.boot();
    await waitFor(() => pending.length === 1);
    pending[0]!.resolve(jsonResponse(syntheticSurface(1.0)));
    await booted;

    setControl(doc, "#k", "2");
    pending[1]!.resolve(jsonResponse(syntheticSurface(2.0)));
    await app.settle();

    const zone = doc.querySelector(".zone") as SVGPathElement;
    expect(zone.getAttribute("data-cpb")).toBe("2");
  });

  it("rejects a non-positive radius before any request is issued", async () => {
    const doc = loadAppDom();
    const { client, pending, urls } = deferredClient();
    const app = new App(doc, client, new FakeWindow());

    const booted = app.boot();
    await waitFor(() => pending.length === 1);
    pending[0]!.resolve(jsonResponse(syntheticSurface(1.0)));
    await booted;
    const requestsAfterBoot = urls.length;

    setControl(doc, "#radius", "0");
    await app.settle();

    expect(urls.length).toBe(requestsAfterBoot);
    const error = doc.querySelector("#radius-error")!;
    expect(error.hasAttribute("hidden")).toBe(false);
    expect(app.getState().radiusMiles).toBe(1);

    // a valid value clears the error and resumes requests
    setControl(doc, "#radius", "0.5");
    expect(urls.length).toBe(requestsAfterBoot + 1);
    expect(doc.querySelector("#radius-error")!.hasAttribute("hidden")).toBe(true);
  });
});
