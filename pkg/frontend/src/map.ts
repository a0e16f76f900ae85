/**
 * SVG choropleth rendering. Geometry comes straight from the burden
 * payload; fills and legend entries are keyed by the payload's
 * class_index and break_set. Tooltips show engine-reported values only.
 */

import { classColor, HATCH_PATTERN_ID, NEUTRAL_FILL } from "./color.js";
import { formatValue, unitLabel } from "./format.js";
import type { Viewport } from "./state.js";
import type { BurdenSurface, ZoneFeature, ZoneGeometry } from "./types.js";

export const MAP_WIDTH = 640;
export const MAP_HEIGHT = 560;

const SVG_NS = "http://www.w3.org/2000/svg";

interface Projector {
  (lon: number, lat: number): [number, number];
}

interface Bounds {
  minLon: number;
  maxLon: number;
  minLat: number;
  maxLat: number;
}

function surfaceBounds(surface: BurdenSurface): Bounds {
  const b: Bounds = { minLon: Infinity, maxLon: -Infinity, minLat: Infinity, maxLat: -Infinity };
  for (const feature of surface.features) {
    for (const ring of ringsOf(feature.geometry)) {
      for (const [lon, lat] of ring as [number, number][]) {
        if (lon < b.minLon) b.minLon = lon;
        if (lon > b.maxLon) b.maxLon = lon;
        if (lat < b.minLat) b.minLat = lat;
        if (lat > b.maxLat) b.maxLat = lat;
      }
    }
  }
  return b;
}

function* ringsOf(geometry: ZoneGeometry): Iterable<number[][]> {
  if (geometry.type === "Polygon") {
    yield* geometry.coordinates;
  } else {
    for (const poly of geometry.coordinates) yield* poly;
  }
}

/** Equirectangular screen projection centered on the viewport. */
export function makeProjector(surface: BurdenSurface, viewport: Viewport | null): Projector {
  const b = surfaceBounds(surface);
  const centerLon = viewport ? viewport.lon : (b.minLon + b.maxLon) / 2;
  const centerLat = viewport ? viewport.lat : (b.minLat + b.maxLat) / 2;
  const zoom = viewport ? viewport.zoom : 1;
  const kx = Math.cos((centerLat * Math.PI) / 180);
  const spanX = Math.max((b.maxLon - b.minLon) * kx, 1e-9);
  const spanY = Math.max(b.maxLat - b.minLat, 1e-9);
  const scale = 0.94 * Math.min(MAP_WIDTH / spanX, MAP_HEIGHT / spanY) * zoom;
  return (lon, lat) => [
    MAP_WIDTH / 2 + (lon - centerLon) * kx * scale,
    MAP_HEIGHT / 2 - (lat - centerLat) * scale,
  ];
}

export function geometryPath(geometry: ZoneGeometry, project: Projector): string {
  const parts: string[] = [];
  for (const ring of ringsOf(geometry)) {
    const cmds = ring.map(([lon, lat], i) => {
      const [x, y] = project(lon!, lat!);
      return `${i === 0 ? "M" : "L"}${x.toFixed(2)} ${y.toFixed(2)}`;
    });
    parts.push(cmds.join(" ") + " Z");
  }
  return parts.join(" ");
}

/** Display anchor for a zone: mean of its outer-ring vertices. */
export function zoneAnchor(geometry: ZoneGeometry): [number, number] {
  const outer =
    geometry.type === "Polygon" ? geometry.coordinates[0]! : geometry.coordinates[0]![0]!;
  let lon = 0;
  let lat = 0;
  for (const pt of outer) {
    lon += pt[0]!;
    lat += pt[1]!;
  }
  return [lon / outer.length, lat / outer.length];
}

function tooltipText(feature: ZoneFeature, unit: string): string {
  const p = feature.properties;
  const schools = p.n_schools === 1 ? "1 school" : `${p.n_schools} schools`;
  return `${p.name} — CPB ${formatValue(p.cpb)} ${unit} (${schools})`;
}

export interface RenderOptions {
  selectedZone: string | null;
  viewport: Viewport | null;
  showShareOverlay: boolean;
  onZoneClick: (zoneId: string) => void;
}

/**
 * Replace the svg contents with the classified surface. Every zone path
 * carries data attributes with the exact payload values so the DOM can be
 * audited against the API response.
 */
export function renderChoropleth(
  svg: SVGSVGElement,
  surface: BurdenSurface,
  options: RenderOptions,
): void {
  const doc = svg.ownerDocument;
  svg.setAttribute("viewBox", `0 0 ${MAP_WIDTH} ${MAP_HEIGHT}`);
  while (svg.firstChild) svg.removeChild(svg.firstChild);

  const defs = doc.createElementNS(SVG_NS, "defs");
  const pattern = doc.createElementNS(SVG_NS, "pattern");
  pattern.setAttribute("id", HATCH_PATTERN_ID);
  pattern.setAttribute("width", "6");
  pattern.setAttribute("height", "6");
  pattern.setAttribute("patternUnits", "userSpaceOnUse");
  pattern.setAttribute("patternTransform", "rotate(45)");
  const patternBg = doc.createElementNS(SVG_NS, "rect");
  patternBg.setAttribute("width", "6");
  patternBg.setAttribute("height", "6");
  patternBg.setAttribute("fill", NEUTRAL_FILL);
  const patternLine = doc.createElementNS(SVG_NS, "line");
  patternLine.setAttribute("x1", "0");
  patternLine.setAttribute("y1", "0");
  patternLine.setAttribute("x2", "0");
  patternLine.setAttribute("y2", "6");
  patternLine.setAttribute("stroke", "#ffffff");
  patternLine.setAttribute("stroke-width", "2");
  pattern.appendChild(patternBg);
  pattern.appendChild(patternLine);
  defs.appendChild(pattern);
  svg.appendChild(defs);

  const project = makeProjector(surface, options.viewport);
  const k = surface.meta.break_set.k;
  const unit = unitLabel(surface.meta.exposure_unit);
  const zonesGroup = doc.createElementNS(SVG_NS, "g");
  zonesGroup.setAttribute("class", "zones");

  for (const feature of surface.features) {
    const p = feature.properties;
    const path = doc.createElementNS(SVG_NS, "path");
    path.setAttribute("d", geometryPath(feature.geometry, project));
    path.setAttribute("class", p.zone_id === options.selectedZone ? "zone selected" : "zone");
    path.setAttribute(
      "fill",
      p.n_schools === 0 ? `url(#${HATCH_PATTERN_ID})` : classColor(p.class_index, k),
    );
    path.setAttribute("data-zone", p.zone_id);
    path.setAttribute("data-class-index", String(p.class_index));
    path.setAttribute("data-cpb", String(p.cpb));
    path.setAttribute("data-n-schools", String(p.n_schools));
    const title = doc.createElementNS(SVG_NS, "title");
    title.textContent = tooltipText(feature, unit);
    path.appendChild(title);
    path.addEventListener("click", () => options.onZoneClick(p.zone_id));
    zonesGroup.appendChild(path);
  }
  svg.appendChild(zonesGroup);

  if (options.showShareOverlay) {
    svg.appendChild(shareOverlay(doc, surface, project));
  }
}

/**
 * Proportional-symbol overlay: one circle per zone, area scaled to the
 * zone's reported Latinx share. Zones without a reported share get no
 * symbol.
 */
function shareOverlay(doc: Document, surface: BurdenSurface, project: Projector): SVGGElement {
  const group = doc.createElementNS(SVG_NS, "g") as SVGGElement;
  group.setAttribute("class", "share-overlay");
  const maxRadius = 16;
  for (const feature of surface.features) {
    const share = feature.properties.latinx_share;
    if (share === null) continue;
    const [lon, lat] = zoneAnchor(feature.geometry);
    const [x, y] = project(lon, lat);
    const circle = doc.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", x.toFixed(2));
    circle.setAttribute("cy", y.toFixed(2));
    circle.setAttribute("r", (maxRadius * Math.sqrt(share)).toFixed(2));
    circle.setAttribute("class", "share-symbol");
    circle.setAttribute("data-zone", feature.properties.zone_id);
    circle.setAttribute("data-share", String(share));
    const title = doc.createElementNS(SVG_NS, "title");
    title.textContent = `${feature.properties.name} — Latinx share ${formatValue(share * 100)}%`;
    circle.appendChild(title);
    group.appendChild(circle);
  }
  return group;
}

/**
 * Legend: one swatch per class with its label and value range. Break
 * values come from the payload's break_set; a single-class surface shows
 * one swatch and no break values.
 */
export function renderLegend(container: HTMLElement, surface: BurdenSurface): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  const { break_set: breakSet, exposure_unit: exposureUnit } = surface.meta;
  const unit = unitLabel(exposureUnit);

  const title = doc.createElement("div");
  title.className = "legend-title";
  title.textContent = `Collective burden (${unit})`;
  container.appendChild(title);

  const list = doc.createElement("ul");
  for (let i = 0; i < breakSet.k; i += 1) {
    const item = doc.createElement("li");
    item.setAttribute("data-class-index", String(i));
    const swatch = doc.createElement("span");
    swatch.className = "swatch";
    swatch.style.backgroundColor = classColor(i, breakSet.k);
    item.appendChild(swatch);
    const label = doc.createElement("span");
    label.textContent = `${breakSet.labels[i]}${rangeText(breakSet.breaks, i)}`;
    item.appendChild(label);
    list.appendChild(item);
  }
  container.appendChild(list);

  const note = doc.createElement("div");
  note.className = "legend-note";
  note.textContent = "Hatched zones contain no schools.";
  container.appendChild(note);
}

function rangeText(breaks: number[], index: number): string {
  if (breaks.length === 0) return "";
  if (index === 0) return `: ≤ ${formatValue(breaks[0]!)}`;
  if (index >= breaks.length) return `: > ${formatValue(breaks[breaks.length - 1]!)}`;
  return `: ${formatValue(breaks[index - 1]!)} – ${formatValue(breaks[index]!)}`;
}
