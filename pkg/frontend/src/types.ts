/**
 * Payload types for the proximity-burden HTTP API.
 *
 * These mirror the JSON the engine serves; the dashboard never computes
 * burden values or class breaks itself, it only displays these fields.
 */

export type ZoneScale = "community_area" | "census_tract";
export type BreakMethod = "natural_breaks" | "quantile";
export type ExposureUnit = "kilometers" | "count";

export interface RunParameters {
  layer: string;
  radius_m: number;
  scale: ZoneScale;
  method: BreakMethod;
  k: number;
}

export interface BreakSetDoc {
  method: BreakMethod;
  k: number;
  /** Upper bounds of every class except the last, ascending. */
  breaks: number[];
  labels: string[];
}

export interface SurfaceMeta {
  parameters: RunParameters;
  break_set: BreakSetDoc;
  layer_title: string;
  exposure_unit: ExposureUnit;
  engine_version: string;
}

export type PolygonCoords = number[][][];
export type MultiPolygonCoords = number[][][][];

export type ZoneGeometry =
  | { type: "Polygon"; coordinates: PolygonCoords }
  | { type: "MultiPolygon"; coordinates: MultiPolygonCoords };

export interface ZoneProperties {
  zone_id: string;
  name: string;
  cpb: number;
  n_schools: number;
  class_index: number;
  class_label: string;
  latinx_share: number | null;
}

export interface ZoneFeature {
  type: "Feature";
  properties: ZoneProperties;
  geometry: ZoneGeometry;
}

export interface BurdenSurface {
  type: "FeatureCollection";
  features: ZoneFeature[];
  meta: SurfaceMeta;
}

export interface LayerInfo {
  id: string;
  title: string;
  kind: "point" | "line" | "polygon";
  exposure_unit: ExposureUnit;
  n_features: number;
}

export interface ZoneSetInfo {
  scale: ZoneScale;
  n_zones: number;
}

export interface LayersDoc {
  engine_version: string;
  layers: LayerInfo[];
  zone_sets: ZoneSetInfo[];
  n_schools: number;
}

export interface SchoolRow {
  school_id: string;
  name: string;
  pss: number | null;
  hs: number;
  score: number | null;
  zone: string | null;
  excluded: boolean;
  reason?: string;
}

export interface SchoolsDoc {
  meta: RunParameters & { engine_version: string };
  schools: SchoolRow[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
