"""Dataset parsing and validation: schools (delimited text), hazard layers
and zones (GeoJSON FeatureCollections, RFC 7946 coordinate order)."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ParseError
from .geo import GeoPoint, Polygon, Polyline, point_in_polygon
from . import geo

POINT_KIND = "point"
LINE_KIND = "line"
POLYGON_KIND = "polygon"
LAYER_KINDS = (POINT_KIND, LINE_KIND, POLYGON_KIND)

SCALE_COMMUNITY_AREA = "community_area"
SCALE_CENSUS_TRACT = "census_tract"
ZONE_SCALES = (SCALE_COMMUNITY_AREA, SCALE_CENSUS_TRACT)

_KIND_FOR_GEOMETRY = {GeoPoint: POINT_KIND, Polyline: LINE_KIND, Polygon: POLYGON_KIND}


@dataclass(frozen=True)
class School:
    id: str
    name: str
    location: GeoPoint
    total_students: int
    neighborhood_students: int
    latinx_share: float | None = None
    grade_band: str | None = None

    @property
    def pss(self) -> float | None:
        """Neighborhood-student share in [0, 1]; None when the school has no students."""
        if self.total_students == 0:
            return None
        return self.neighborhood_students / self.total_students


@dataclass(frozen=True)
class ParsedFeature:
    feature_id: str
    geometry: GeoPoint | Polyline | Polygon
    properties: dict


@dataclass(frozen=True)
class HazardLayer:
    id: str
    title: str
    kind: str
    features: tuple[ParsedFeature, ...]

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise ParseError(f"unknown layer kind {self.kind!r}")
        for feat in self.features:
            got = _KIND_FOR_GEOMETRY[type(feat.geometry)]
            if got != self.kind:
                raise ParseError(
                    f"layer {self.id!r} is kind {self.kind!r} but feature "
                    f"{feat.feature_id!r} has {got} geometry"
                )

    @property
    def exposure_unit(self) -> str:
        return "kilometers" if self.kind == LINE_KIND else "count"

    @property
    def feature_ids(self) -> frozenset[str]:
        return frozenset(f.feature_id for f in self.features)


@dataclass(frozen=True)
class Zone:
    id: str
    name: str
    polygons: tuple[Polygon, ...]
    latinx_share: float | None = None

    def __post_init__(self):
        if not self.polygons:
            raise ParseError(f"zone {self.id!r} has no geometry")

    def contains(self, p: GeoPoint) -> bool:
        return any(point_in_polygon(p, poly) for poly in self.polygons)


@dataclass(frozen=True)
class ZoneSet:
    scale: str
    zones: tuple[Zone, ...]

    def __post_init__(self):
        if self.scale not in ZONE_SCALES:
            raise ParseError(f"unknown zone scale {self.scale!r}")
        seen = set()
        for z in self.zones:
            if z.id in seen:
                raise ParseError(f"duplicate zone id {z.id!r} in {self.scale} set")
            seen.add(z.id)

    def by_id(self) -> dict[str, Zone]:
        return {z.id: z for z in self.zones}


def _as_utf8(data: bytes | str) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _point(coords, where: str) -> GeoPoint:
    if not isinstance(coords, (list, tuple)) or len(coords) < 2:
        raise ParseError(f"{where}: position must be [lon, lat]")
    try:
        return GeoPoint(float(coords[0]), float(coords[1]))
    except (TypeError, ValueError) as e:
        raise ParseError(f"{where}: {e}") from e


def _polyline(coords, where: str) -> Polyline:
    if not isinstance(coords, list) or len(coords) < 2:
        raise ParseError(f"{where}: LineString needs at least 2 positions")
    return Polyline(tuple(_point(c, where) for c in coords))


def _ring(coords, where: str) -> tuple[GeoPoint, ...]:
    if not isinstance(coords, list) or len(coords) < 4:
        raise ParseError(f"{where}: ring needs at least 4 positions")
    pts = tuple(_point(c, where) for c in coords)
    if pts[0].lon != pts[-1].lon or pts[0].lat != pts[-1].lat:
        raise ParseError(f"{where}: ring is not closed")
    return pts


def _polygon(coords, where: str) -> Polygon:
    if not isinstance(coords, list) or not coords:
        raise ParseError(f"{where}: Polygon needs at least one ring")
    rings = [_ring(r, where) for r in coords]
    return Polygon(outer=rings[0], holes=tuple(rings[1:]))


def parse_geojson(data: bytes | str, id_property: str | None = None) -> list[ParsedFeature]:
    """Parse a FeatureCollection into primitive-geometry features.

    Multi* geometries expand into several features sharing one feature id.
    The id comes from the "id" member, then from id_property, then is
    synthesized as f<index> from the feature's position in the collection.
    """
    text = _as_utf8(data)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        byte_offset = len(text[: e.pos].encode("utf-8"))
        raise ParseError(f"malformed JSON at byte offset {byte_offset}: {e.msg}") from e

    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ParseError("expected a GeoJSON FeatureCollection")
    raw_features = doc.get("features")
    if not isinstance(raw_features, list):
        raise ParseError("FeatureCollection has no features array")

    out: list[ParsedFeature] = []
    for idx, feat in enumerate(raw_features):
        if not isinstance(feat, dict) or feat.get("type") != "Feature":
            raise ParseError(f"feature {idx}: not a Feature object")
        props = feat.get("properties") or {}
        if not isinstance(props, dict):
            raise ParseError(f"feature {idx}: properties must be an object")

        if feat.get("id") is not None:
            feature_id = str(feat["id"])
        elif id_property is not None and props.get(id_property) is not None:
            feature_id = str(props[id_property])
        else:
            feature_id = f"f{idx}"

        geom = feat.get("geometry")
        if not isinstance(geom, dict):
            raise ParseError(f"feature {idx}: missing geometry")
        gtype = geom.get("type")
        coords = geom.get("coordinates")
        where = f"feature {idx} ({feature_id})"

        if gtype == "Point":
            geoms = [_point(coords, where)]
        elif gtype == "LineString":
            geoms = [_polyline(coords, where)]
        elif gtype == "MultiLineString":
            if not isinstance(coords, list) or not coords:
                raise ParseError(f"{where}: empty MultiLineString")
            geoms = [_polyline(part, where) for part in coords]
        elif gtype == "Polygon":
            geoms = [_polygon(coords, where)]
        elif gtype == "MultiPolygon":
            if not isinstance(coords, list) or not coords:
                raise ParseError(f"{where}: empty MultiPolygon")
            geoms = [_polygon(part, where) for part in coords]
        else:
            raise ParseError(f"unsupported geometry type {gtype!r} at feature {idx}")

        for g in geoms:
            out.append(ParsedFeature(feature_id=feature_id, geometry=g, properties=props))
    return out


def geometry_to_geojson(geom: GeoPoint | Polyline | Polygon) -> dict:
    """Primitive geometry back to a GeoJSON geometry object."""
    if isinstance(geom, GeoPoint):
        return {"type": "Point", "coordinates": [geom.lon, geom.lat]}
    if isinstance(geom, Polyline):
        return {"type": "LineString", "coordinates": [[p.lon, p.lat] for p in geom.points]}
    if isinstance(geom, Polygon):
        rings = [[[p.lon, p.lat] for p in ring] for ring in geom.rings()]
        return {"type": "Polygon", "coordinates": rings}
    raise TypeError(f"cannot serialize {type(geom).__name__}")


def zone_geometry_to_geojson(zone: Zone) -> dict:
    """Zone geometry re-emitted verbatim (Polygon, or MultiPolygon when multi-part)."""
    if len(zone.polygons) == 1:
        return geometry_to_geojson(zone.polygons[0])
    parts = [geometry_to_geojson(p)["coordinates"] for p in zone.polygons]
    return {"type": "MultiPolygon", "coordinates": parts}


# Logical school columns; latinx_share and grade_band are optional.
SCHOOL_FIELDS = ("id", "name", "lon", "lat", "total_students", "neighborhood_students")
OPTIONAL_SCHOOL_FIELDS = ("latinx_share", "grade_band")


def _parse_share(raw: str, unit: str, where: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"{where}: non-numeric share {raw!r}")
    if unit == "percent":
        value = value / 100.0
    if not 0.0 <= value <= 1.0:
        raise ParseError(f"{where}: share {value} outside [0, 1]")
    return value


def parse_schools(
    data: bytes | str,
    mapping: dict[str, str],
    delimiter: str = ",",
    share_unit: str = "fraction",
) -> list[School]:
    """Parse delimited school records using a logical->header column mapping.

    share_unit declares how latinx_share is stored ("fraction" or "percent").
    Rows with total_students == 0 are retained; validate_dataset and the
    burden run flag and exclude them. All row-level problems are collected
    and reported together.
    """
    if share_unit not in ("fraction", "percent"):
        raise ParseError(f"unknown share unit {share_unit!r}")
    missing = [f for f in SCHOOL_FIELDS if f not in mapping]
    if missing:
        raise ParseError(f"school column mapping missing fields: {', '.join(missing)}")

    reader = csv.DictReader(io.StringIO(_as_utf8(data)), delimiter=delimiter)
    if reader.fieldnames is None:
        raise ParseError("schools file is empty (no header row)")
    for logical, column in mapping.items():
        if column not in reader.fieldnames:
            raise ParseError(f"mapped column {column!r} (for {logical}) not in header")

    schools: list[School] = []
    errors: list[str] = []
    seen_ids: set[str] = set()
    for row_num, row in enumerate(reader, start=2):  # header is row 1
        where = f"row {row_num}"
        try:
            school_id = (row[mapping["id"]] or "").strip()
            if not school_id:
                raise ParseError(f"{where}: empty school id")
            if school_id in seen_ids:
                raise ParseError(f"{where}: duplicate school id {school_id!r}")

            def _int(field_name: str) -> int:
                raw = (row[mapping[field_name]] or "").strip()
                try:
                    return int(raw)
                except ValueError:
                    raise ParseError(f"{where}: non-numeric {field_name} {raw!r}")

            def _float(field_name: str) -> float:
                raw = (row[mapping[field_name]] or "").strip()
                try:
                    return float(raw)
                except ValueError:
                    raise ParseError(f"{where}: non-numeric {field_name} {raw!r}")

            total = _int("total_students")
            neighborhood = _int("neighborhood_students")
            if total < 0 or neighborhood < 0:
                raise ParseError(f"{where}: negative student count")
            if neighborhood > total:
                raise ParseError(
                    f"{where}: neighborhood_students {neighborhood} exceeds total_students {total}"
                )
            try:
                location = GeoPoint(_float("lon"), _float("lat"))
            except ValueError as e:
                raise ParseError(f"{where}: {e}")

            latinx = None
            if "latinx_share" in mapping:
                raw = (row[mapping["latinx_share"]] or "").strip()
                if raw:
                    latinx = _parse_share(raw, share_unit, where)
            grade_band = None
            if "grade_band" in mapping:
                grade_band = (row[mapping["grade_band"]] or "").strip() or None

            seen_ids.add(school_id)
            schools.append(
                School(
                    id=school_id,
                    name=(row[mapping["name"]] or "").strip(),
                    location=location,
                    total_students=total,
                    neighborhood_students=neighborhood,
                    latinx_share=latinx,
                    grade_band=grade_band,
                )
            )
        except ParseError as e:
            errors.append(str(e))
    if errors:
        raise ParseError("school file has invalid rows:\n  " + "\n  ".join(errors))
    return schools


def build_hazard_layer(layer_id: str, title: str, kind: str, features: Iterable[ParsedFeature]) -> HazardLayer:
    feats = tuple(sorted(features, key=lambda f: f.feature_id))
    return HazardLayer(id=layer_id, title=title, kind=kind, features=feats)


def build_zone_set(
    scale: str,
    features: Iterable[ParsedFeature],
    name_property: str | None = None,
    latinx_share_property: str | None = None,
    share_unit: str = "fraction",
) -> ZoneSet:
    """Group polygon features by feature id into zones (multi-part zones merge)."""
    grouped: dict[str, list[ParsedFeature]] = {}
    order: list[str] = []
    for feat in features:
        if not isinstance(feat.geometry, Polygon):
            raise ParseError(
                f"zone feature {feat.feature_id!r} has non-polygon geometry; zones must be polygons"
            )
        if feat.feature_id not in grouped:
            order.append(feat.feature_id)
        grouped.setdefault(feat.feature_id, []).append(feat)

    zones = []
    for zone_id in order:
        feats = grouped[zone_id]
        props = feats[0].properties
        name = str(props.get(name_property, zone_id)) if name_property else zone_id
        share = None
        if latinx_share_property is not None:
            raw = props.get(latinx_share_property)
            if raw is not None and raw != "":
                share = _parse_share(str(raw), share_unit, f"zone {zone_id}")
        zones.append(
            Zone(
                id=zone_id,
                name=name,
                polygons=tuple(f.geometry for f in feats),
                latinx_share=share,
            )
        )
    zones.sort(key=lambda z: z.id)
    return ZoneSet(scale=scale, zones=tuple(zones))


SEVERITY_INFO = "info"
SEVERITY_WARN = "warn"
SEVERITY_ERROR = "error"


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    message: str
    subject: str | None = None

    def to_dict(self) -> dict:
        d = {"severity": self.severity, "code": self.code, "message": self.message}
        if self.subject is not None:
            d["subject"] = self.subject
        return d


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    def add(self, severity: str, code: str, message: str, subject: str | None = None):
        self.findings.append(Finding(severity, code, message, subject))

    @property
    def ok(self) -> bool:
        return not any(f.severity == SEVERITY_ERROR for f in self.findings)

    def count(self, severity: str) -> int:
        return sum(1 for f in self.findings if f.severity == severity)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "errors": self.count(SEVERITY_ERROR),
            "warnings": self.count(SEVERITY_WARN),
            "infos": self.count(SEVERITY_INFO),
            "findings": [f.to_dict() for f in self.findings],
        }


def _coords_in_range(p: GeoPoint) -> bool:
    return -180.0 <= p.lon <= 180.0 and -90.0 <= p.lat <= 90.0


def validate_dataset(
    schools: list[School],
    layers: Iterable[HazardLayer],
    zone_sets: Iterable[ZoneSet],
) -> ValidationReport:
    """Cross-dataset sanity report. The dataset is usable iff it has no errors."""
    report = ValidationReport()
    zone_sets = list(zone_sets)

    for school in schools:
        if not _coords_in_range(school.location):
            report.add(
                SEVERITY_ERROR,
                "coordinate_range",
                f"school {school.id} has out-of-range coordinates",
                school.id,
            )
            continue
        if school.total_students == 0:
            report.add(
                SEVERITY_WARN,
                "no_students",
                f"school {school.id} has zero total students; burden undefined, excluded",
                school.id,
            )
        for zone_set in zone_sets:
            if not any(z.contains(school.location) for z in zone_set.zones):
                report.add(
                    SEVERITY_WARN,
                    "school_outside_zones",
                    f"school {school.id} is outside every {zone_set.scale} zone",
                    school.id,
                )

    for zone_set in zone_sets:
        for zone in zone_set.zones:
            if not any(
                zone.contains(s.location) for s in schools if _coords_in_range(s.location)
            ):
                report.add(
                    SEVERITY_INFO,
                    "zone_without_schools",
                    f"{zone_set.scale} zone {zone.id} contains no schools",
                    zone.id,
                )

    for layer in layers:
        if not layer.features:
            report.add(
                SEVERITY_WARN, "empty_layer", f"hazard layer {layer.id} has no features", layer.id
            )
        else:
            for feat in layer.features:
                lo_lon, lo_lat, hi_lon, hi_lat = geo.geometry_bbox(feat.geometry)
                if not (
                    -180.0 <= lo_lon <= 180.0
                    and -180.0 <= hi_lon <= 180.0
                    and -90.0 <= lo_lat <= 90.0
                    and -90.0 <= hi_lat <= 90.0
                ):
                    report.add(
                        SEVERITY_ERROR,
                        "coordinate_range",
                        f"layer {layer.id} feature {feat.feature_id} out of range",
                        feat.feature_id,
                    )
    return report
