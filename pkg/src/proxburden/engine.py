"""Shared compute path behind both the CLI and the HTTP service.

Loads a dataset once, runs burden computations for request tuples, and
serializes artifacts. The CLI writes the serialized bytes to files and
the service returns the same bytes over HTTP, so the two can never drift.

Determinism rules concentrated here: schools and zones are always
processed in ascending id order, worker threads only fill a per-school
map that is assembled in sorted order afterwards, and run metadata
carries no timestamps — reruns over identical inputs produce identical
bytes.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

from . import burden as burden_mod
from . import stats as stats_mod
from .classify import (
    METHOD_NATURAL_BREAKS,
    METHOD_QUANTILE,
    BreakSet,
    ClassifiedSurface,
    jenks_breaks,
    quantile_breaks,
)
from .config import RunConfig
from .errors import ConfigError, ScaleUnavailableError
from .grid import FeatureIndex, build_index
from .ingest import (
    SCALE_CENSUS_TRACT,
    SCALE_COMMUNITY_AREA,
    HazardLayer,
    School,
    ZoneSet,
    build_hazard_layer,
    build_zone_set,
    parse_geojson,
    parse_schools,
    validate_dataset,
    zone_geometry_to_geojson,
)

ENGINE_VERSION = "0.1.0"

EXCLUDED_NO_STUDENTS = "no_students"
EXCLUDED_NO_ZONE = "no_zone"

# Grid cell hint for hazard indexes; roughly one search radius per cell.
_INDEX_CELL_HINT_M = 1609.344


@dataclass(frozen=True)
class Dataset:
    schools: tuple[School, ...]
    layers: Mapping[str, HazardLayer]
    indexes: Mapping[str, FeatureIndex]
    zone_sets: Mapping[str, ZoneSet]
    assignments: Mapping[str, Mapping[str, str | None]]
    input_digests: Mapping[str, str]

    def zone_set(self, scale: str) -> ZoneSet:
        try:
            return self.zone_sets[scale]
        except KeyError:
            raise ScaleUnavailableError(
                f"zone scale {scale!r} is not loaded; configure a zone set for it"
            ) from None

    def layer(self, layer_id: str) -> HazardLayer:
        try:
            return self.layers[layer_id]
        except KeyError:
            raise ConfigError(f"no hazard layer with id {layer_id!r}") from None


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def load_dataset(config: RunConfig) -> Dataset:
    """Read and parse every input the config names; build indexes and zone maps."""
    digests: dict[str, str] = {}

    school_bytes = config.resolve(config.schools.path).read_bytes()
    digests[config.schools.path] = _sha256(school_bytes)
    schools = tuple(
        sorted(
            parse_schools(
                school_bytes,
                mapping=config.schools.mapping,
                delimiter=config.schools.delimiter,
                share_unit=config.schools.share_unit,
            ),
            key=lambda s: s.id,
        )
    )

    layers: dict[str, HazardLayer] = {}
    indexes: dict[str, FeatureIndex] = {}
    for lc in config.layers:
        data = config.resolve(lc.path).read_bytes()
        digests[lc.path] = _sha256(data)
        features = parse_geojson(data, id_property=lc.id_property)
        layer = build_hazard_layer(lc.id, lc.title, lc.kind, features)
        layers[lc.id] = layer
        indexes[lc.id] = build_index(
            [(f.feature_id, f.geometry) for f in layer.features],
            cell_size_hint_m=_INDEX_CELL_HINT_M,
        )

    zone_sets: dict[str, ZoneSet] = {}
    for zc in config.zone_sets:
        data = config.resolve(zc.path).read_bytes()
        digests[zc.path] = _sha256(data)
        features = parse_geojson(data, id_property=zc.id_property)
        zone_sets[zc.scale] = build_zone_set(
            zc.scale,
            features,
            name_property=zc.name_property,
            latinx_share_property=zc.latinx_share_property,
            share_unit=zc.share_unit,
        )

    assignments = {
        scale: {
            school.id: burden_mod.assign_zone(school, zone_set) for school in schools
        }
        for scale, zone_set in zone_sets.items()
    }
    return Dataset(
        schools=schools,
        layers=layers,
        indexes=indexes,
        zone_sets=zone_sets,
        assignments=assignments,
        input_digests=digests,
    )


@dataclass(frozen=True)
class RunRequest:
    layer_id: str
    radius_m: float
    scale: str
    method: str
    k: int

    def __post_init__(self):
        if not (math.isfinite(self.radius_m) and self.radius_m > 0):
            raise ConfigError(f"radius must be positive and finite, got {self.radius_m}")
        if self.k < 1:
            raise ConfigError(f"class count must be at least 1, got {self.k}")
        if self.method not in (METHOD_NATURAL_BREAKS, METHOD_QUANTILE):
            raise ConfigError(f"unknown classification method {self.method!r}")
        if self.scale not in (SCALE_COMMUNITY_AREA, SCALE_CENSUS_TRACT):
            raise ConfigError(f"unknown zone scale {self.scale!r}")

    def parameters(self) -> dict:
        return {
            "layer": self.layer_id,
            "radius_m": self.radius_m,
            "scale": self.scale,
            "method": self.method,
            "k": self.k,
        }


@dataclass(frozen=True)
class RunRecord:
    """One audit row per school, scored or not."""

    school_id: str
    name: str
    pss: float | None
    hs: float
    score: float | None
    zone_id: str | None
    excluded_reason: str | None

    @property
    def excluded(self) -> bool:
        return self.excluded_reason is not None


@dataclass(frozen=True)
class RunResult:
    request: RunRequest
    records: tuple[RunRecord, ...]
    scores: tuple[burden_mod.BurdenScore, ...]
    excluded: tuple[tuple[str, str], ...]
    burdens: tuple[burden_mod.ZoneBurden, ...]
    surface: ClassifiedSurface

    @property
    def break_set(self) -> BreakSet:
        return self.surface.break_set


def _compute_breaks(
    burdens, method: str, k: int, exclude_zero_school_zones: bool
) -> BreakSet:
    values = [
        zb.cpb
        for zb in burdens
        if not (exclude_zero_school_zones and zb.n_schools == 0)
    ]
    if method == METHOD_QUANTILE:
        return quantile_breaks(values, k)
    return jenks_breaks(values, k)


def compute_run(
    dataset: Dataset,
    request: RunRequest,
    exclude_zero_school_zones: bool = False,
    workers: int = 1,
) -> RunResult:
    """Score every school against one hazard layer and roll up by zone.

    Worker threads (if any) each handle whole schools; results land in a
    map keyed by school id and are assembled in sorted order, so the
    worker count never changes a single output bit.
    """
    layer = dataset.layer(request.layer_id)
    index = dataset.indexes.get(request.layer_id)
    zone_set = dataset.zone_set(request.scale)
    assignment = dataset.assignments[request.scale]

    def exposure_for(school: School):
        return burden_mod.hazard_exposure(school, layer, request.radius_m, index)

    exposures: dict[str, burden_mod.ExposureResult] = {}
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for exp in pool.map(exposure_for, dataset.schools):
                exposures[exp.school_id] = exp
    else:
        for school in dataset.schools:
            exposures[school.id] = exposure_for(school)

    records: list[RunRecord] = []
    scores: list[burden_mod.BurdenScore] = []
    excluded: list[tuple[str, str]] = []
    for school in dataset.schools:  # already ascending by id
        exp = exposures[school.id]
        zone_id = assignment[school.id]
        if school.total_students == 0:
            reason = EXCLUDED_NO_STUDENTS
        elif zone_id is None:
            reason = EXCLUDED_NO_ZONE
        else:
            reason = None

        score_value = None
        if school.total_students > 0:
            bs = burden_mod.proximity_burden(school, exp)
            scores.append(bs)
            score_value = bs.score
        if reason is not None:
            excluded.append((school.id, reason))
        records.append(
            RunRecord(
                school_id=school.id,
                name=school.name,
                pss=school.pss,
                hs=exp.hs,
                score=score_value,
                zone_id=zone_id,
                excluded_reason=reason,
            )
        )

    burdens = tuple(burden_mod.collective_burden(scores, assignment, zone_set))
    break_set = _compute_breaks(
        burdens, request.method, request.k, exclude_zero_school_zones
    )
    surface = ClassifiedSurface.from_burdens(burdens, break_set)
    return RunResult(
        request=request,
        records=tuple(records),
        scores=tuple(scores),
        excluded=tuple(excluded),
        burdens=burdens,
        surface=surface,
    )


def validate_run(dataset: Dataset):
    return validate_dataset(
        list(dataset.schools), dataset.layers.values(), dataset.zone_sets.values()
    )


def maup_run(
    dataset: Dataset,
    layer_id: str,
    radius_m: float,
    method: str,
    k: int,
    exclude_zero_school_zones: bool = False,
    workers: int = 1,
) -> stats_mod.MaupReport:
    """Same tuple at both scales, then the cross-scale comparison."""
    coarse = compute_run(
        dataset,
        RunRequest(layer_id, radius_m, SCALE_COMMUNITY_AREA, method, k),
        exclude_zero_school_zones,
        workers,
    )
    fine = compute_run(
        dataset,
        RunRequest(layer_id, radius_m, SCALE_CENSUS_TRACT, method, k),
        exclude_zero_school_zones,
        workers,
    )
    mapping = stats_mod.containment_map(
        dataset.zone_set(SCALE_CENSUS_TRACT), dataset.zone_set(SCALE_COMMUNITY_AREA)
    )
    return stats_mod.maup_compare(coarse.surface, fine.surface, mapping)


def demographics_run(dataset: Dataset, result: RunResult) -> stats_mod.ClassDemographics:
    scale = result.request.scale
    return stats_mod.class_demographics(
        result.surface,
        list(dataset.schools),
        dataset.assignments[scale],
        dataset.zone_set(scale),
    )


# ---------------------------------------------------------------------------
# Artifact serialization. Every artifact is produced as bytes here; the CLI
# writes them to files, the HTTP service sends them as bodies, byte for byte.

def _json_bytes(obj, compact: bool = False) -> bytes:
    if compact:
        text = json.dumps(obj, ensure_ascii=False, separators=(",", ":"))
    else:
        text = json.dumps(obj, ensure_ascii=False, indent=2)
    return (text + "\n").encode("utf-8")


def scores_csv_bytes(result: RunResult) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["school_id", "pss", "hs", "score", "zone"])
    for rec in result.records:
        writer.writerow(
            [
                rec.school_id,
                "" if rec.pss is None else repr(rec.pss),
                repr(rec.hs),
                "" if rec.score is None else repr(rec.score),
                "" if rec.zone_id is None else rec.zone_id,
            ]
        )
    return buf.getvalue().encode("utf-8")


def _meta(dataset: Dataset, result: RunResult) -> dict:
    layer = dataset.layer(result.request.layer_id)
    return {
        "parameters": result.request.parameters(),
        "break_set": result.break_set.to_dict(),
        "layer_title": layer.title,
        "exposure_unit": layer.exposure_unit,
        "engine_version": ENGINE_VERSION,
    }


def burden_geojson_bytes(dataset: Dataset, result: RunResult) -> bytes:
    zones = dataset.zone_set(result.request.scale).by_id()
    features = []
    for zb, ci in zip(result.surface.burdens, result.surface.class_indices):
        zone = zones[zb.zone_id]
        props = {
            "zone_id": zb.zone_id,
            "name": zone.name,
            "cpb": zb.cpb,
            "n_schools": zb.n_schools,
            "class_index": ci,
            "class_label": result.break_set.labels[ci],
        }
        if zone.latinx_share is not None:
            props["latinx_share"] = zone.latinx_share
        features.append(
            {
                "type": "Feature",
                "properties": props,
                "geometry": zone_geometry_to_geojson(zone),
            }
        )
    doc = {
        "type": "FeatureCollection",
        "meta": _meta(dataset, result),
        "features": features,
    }
    return _json_bytes(doc, compact=True)


def schools_json_bytes(dataset: Dataset, result: RunResult) -> bytes:
    rows = []
    for rec in result.records:
        rows.append(
            {
                "school_id": rec.school_id,
                "name": rec.name,
                "pss": rec.pss,
                "hs": rec.hs,
                "score": rec.score,
                "zone": rec.zone_id,
                "excluded": rec.excluded,
                **({"reason": rec.excluded_reason} if rec.excluded else {}),
            }
        )
    doc = {
        "meta": {
            "parameters": result.request.parameters(),
            "engine_version": ENGINE_VERSION,
        },
        "schools": rows,
    }
    return _json_bytes(doc, compact=True)


def run_json_bytes(dataset: Dataset, result: RunResult) -> bytes:
    doc = {
        "engine_version": ENGINE_VERSION,
        "parameters": result.request.parameters(),
        "inputs": {path: dataset.input_digests[path] for path in sorted(dataset.input_digests)},
        "schools": {
            "total": len(result.records),
            "scored": len(result.scores),
            "excluded": [
                {"school_id": sid, "reason": reason} for sid, reason in result.excluded
            ],
        },
        "zones": {
            "scale": result.request.scale,
            "count": len(result.burdens),
            "with_schools": sum(1 for zb in result.burdens if zb.n_schools > 0),
        },
        "break_set": result.break_set.to_dict(),
    }
    return _json_bytes(doc)


def maup_json_bytes(report: stats_mod.MaupReport, layer_id: str, radius_m: float) -> bytes:
    doc = {
        "engine_version": ENGINE_VERSION,
        "parameters": {
            "layer": layer_id,
            "radius_m": radius_m,
            "method": report.method,
            "k": report.k,
        },
        **report.to_dict(),
    }
    return _json_bytes(doc)


def demographics_json_bytes(
    report: stats_mod.ClassDemographics, layer_id: str, radius_m: float
) -> bytes:
    doc = {
        "engine_version": ENGINE_VERSION,
        "parameters": {
            "layer": layer_id,
            "radius_m": radius_m,
            "scale": report.scale,
            "method": report.method,
            "k": report.k,
        },
        **report.to_dict(),
    }
    return _json_bytes(doc)


def validation_json_bytes(report) -> bytes:
    return _json_bytes(report.to_dict())


def layers_json_bytes(dataset: Dataset) -> bytes:
    layer_rows = [
        {
            "id": layer.id,
            "title": layer.title,
            "kind": layer.kind,
            "exposure_unit": layer.exposure_unit,
            "n_features": len(layer.feature_ids),
        }
        for layer in sorted(dataset.layers.values(), key=lambda l: l.id)
    ]
    zone_rows = [
        {"scale": scale, "n_zones": len(dataset.zone_sets[scale].zones)}
        for scale in sorted(dataset.zone_sets)
    ]
    doc = {
        "engine_version": ENGINE_VERSION,
        "layers": layer_rows,
        "zone_sets": zone_rows,
        "n_schools": len(dataset.schools),
    }
    return _json_bytes(doc, compact=True)
