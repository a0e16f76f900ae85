/** Shared test scaffolding: the real page markup plus a fake window. */

import { readFileSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

import type { WindowLike } from "../src/app.js";
import type { BurdenSurface } from "../src/types.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));

/**
 * Load the shipped index.html body into the jsdom document so tests
 * exercise the exact markup the engine serves (scripts inserted through
 * innerHTML never execute, so the page's module tag is inert here).
 */
export function loadAppDom(): Document {
  const html = readFileSync(path.join(HERE, "..", "public", "index.html"), "utf8");
  const body = html.match(/<body>([\s\S]*)<\/body>/);
  if (!body) throw new Error("index.html has no body");
  document.body.innerHTML = body[1]!;
  return document;
}

/**
 * Minimal window stand-in with a working history stack, so URL behavior
 * is tested deterministically and listeners never leak between tests.
 */
export class FakeWindow implements WindowLike {
  readonly location = { search: "" };
  readonly pushed: string[] = [];
  private stack: string[];
  private position = 0;
  private listeners: Array<() => void> = [];

  constructor(initialSearch = "") {
    this.location.search = initialSearch;
    this.stack = [initialSearch];
  }

  readonly history = {
    pushState: (_data: unknown, _unused: string, url?: string): void => {
      const search = searchOf(url ?? "");
      this.stack = this.stack.slice(0, this.position + 1);
      this.stack.push(search);
      this.position += 1;
      this.location.search = search;
      this.pushed.push(search);
    },
    replaceState: (_data: unknown, _unused: string, url?: string): void => {
      const search = searchOf(url ?? "");
      this.stack[this.position] = search;
      this.location.search = search;
    },
  };

  addEventListener(_type: "popstate", listener: () => void): void {
    this.listeners.push(listener);
  }

  /** Browser "back": move in the stack, then fire popstate. */
  back(): void {
    if (this.position === 0) throw new Error("history stack is empty");
    this.position -= 1;
    this.location.search = this.stack[this.position]!;
    for (const listener of this.listeners) listener();
  }

  forward(): void {
    if (this.position >= this.stack.length - 1) throw new Error("already at newest entry");
    this.position += 1;
    this.location.search = this.stack[this.position]!;
    for (const listener of this.listeners) listener();
  }
}

function searchOf(url: string): string {
  const idx = url.indexOf("?");
  return idx < 0 ? "" : url.slice(idx);
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** One-square-zone surface with a recognizable cpb, for stubbed fetches. */
export function syntheticSurface(cpb: number, k = 2): BurdenSurface {
  return {
    type: "FeatureCollection",
    features: [
      {
        type: "Feature",
        properties: {
          zone_id: "Z1",
          name: "Zone One",
          cpb,
          n_schools: 3,
          class_index: k - 1,
          class_label: "High",
          latinx_share: 0.5,
        },
        geometry: {
          type: "Polygon",
          coordinates: [
            [
              [-87.7, 41.8],
              [-87.6, 41.8],
              [-87.6, 41.9],
              [-87.7, 41.9],
              [-87.7, 41.8],
            ],
          ],
        },
      },
    ],
    meta: {
      parameters: {
        layer: "industrial_roads",
        radius_m: 1609.344,
        scale: "community_area",
        method: "natural_breaks",
        k,
      },
      break_set: {
        method: "natural_breaks",
        k,
        breaks: k > 1 ? [cpb / 2] : [],
        labels: k > 1 ? ["Low", "High"] : ["All"],
      },
      layer_title: "Heavy traffic roads",
      exposure_unit: "kilometers",
      engine_version: "0.1.0",
    },
  };
}
