"""Per-school hazard exposure, proximity-burden scores, and zone rollups.

score = PSS x Hs, where PSS is the neighborhood-student share of
enrollment and Hs is the hazard exposure within the radius: a feature
count for point and polygon layers, clipped kilometers for line layers.
Zone-level collective burden is the plain sum of member school scores.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import ConfigError
from .geo import (
    GeoPoint,
    Polygon,
    Polyline,
    clip_length_in_disc,
    haversine_distance,
    min_distance_to_polygon,
)
from .grid import FeatureIndex, query_radius_candidates
from .ingest import (
    LINE_KIND,
    POINT_KIND,
    POLYGON_KIND,
    HazardLayer,
    School,
    ZoneSet,
)


@dataclass(frozen=True)
class ExposureResult:
    school_id: str
    layer_id: str
    radius_m: float
    hs: float

    def __post_init__(self):
        if self.hs < 0:
            raise ValueError(f"exposure for school {self.school_id} is negative")


@dataclass(frozen=True)
class BurdenScore:
    school_id: str
    layer_id: str
    radius_m: float
    pss: float
    hs: float
    score: float

    def __post_init__(self):
        if not 0.0 <= self.pss <= 1.0:
            raise ValueError(f"pss {self.pss} outside [0, 1] for school {self.school_id}")
        if self.score != self.pss * self.hs:
            raise ValueError(f"score for school {self.school_id} is not pss * hs")


@dataclass(frozen=True)
class ZoneBurden:
    zone_id: str
    scale: str
    cpb: float
    n_schools: int
    school_ids: tuple[str, ...]

    def __post_init__(self):
        if self.n_schools != len(self.school_ids):
            raise ValueError(f"zone {self.zone_id}: school count disagrees with id list")
        if self.cpb < 0:
            raise ValueError(f"zone {self.zone_id}: negative collective burden")


def _part_within(geom, center: GeoPoint, radius_m: float) -> bool:
    if isinstance(geom, GeoPoint):
        return haversine_distance(center, geom) <= radius_m
    if isinstance(geom, Polygon):
        return min_distance_to_polygon(center, geom) <= radius_m
    raise TypeError(f"unexpected geometry {type(geom).__name__} in count layer")


def hazard_exposure(
    school: School,
    layer: HazardLayer,
    radius_m: float,
    index: FeatureIndex | None = None,
) -> ExposureResult:
    """Hazard exposure Hs for one school against one layer.

    Point and polygon layers count features whose distance to the school
    is at most the radius; line layers sum the clipped length inside the
    radius disc, in kilometers. The spatial index only prunes candidates;
    every survivor is re-checked exactly, and summation stays in ascending
    feature-id order, so indexed and unindexed runs agree bit for bit.
    """
    if not (math.isfinite(radius_m) and radius_m > 0):
        raise ConfigError(f"radius must be positive and finite, got {radius_m}")
    if index is not None and index.feature_ids != layer.feature_ids:
        raise ConfigError(
            f"spatial index does not cover layer {layer.id!r}; rebuild it from this layer"
        )

    parts: dict[str, list] = {}
    for feat in layer.features:
        parts.setdefault(feat.feature_id, []).append(feat.geometry)

    if index is None:
        candidate_ids = sorted(parts)
    else:
        candidate_ids = query_radius_candidates(index, school.location, radius_m)

    if layer.kind == LINE_KIND:
        total_m = 0.0
        for fid in candidate_ids:
            for geom in parts[fid]:
                total_m += clip_length_in_disc(school.location, radius_m, geom)
        hs = total_m / 1000.0
    else:
        count = 0
        for fid in candidate_ids:
            if any(_part_within(g, school.location, radius_m) for g in parts[fid]):
                count += 1
        hs = float(count)
    return ExposureResult(
        school_id=school.id, layer_id=layer.id, radius_m=radius_m, hs=hs
    )


def proximity_burden(school: School, exposure: ExposureResult) -> BurdenScore:
    """Combine a school's neighborhood share with its exposure (score = PSS x Hs)."""
    if exposure.school_id != school.id:
        raise ValueError(
            f"exposure for school {exposure.school_id!r} applied to {school.id!r}"
        )
    pss = school.pss
    if pss is None:
        raise ValueError(
            f"school {school.id} has no students; callers must exclude it before scoring"
        )
    return BurdenScore(
        school_id=school.id,
        layer_id=exposure.layer_id,
        radius_m=exposure.radius_m,
        pss=pss,
        hs=exposure.hs,
        score=pss * exposure.hs,
    )


def assign_zone(school: School, zone_set: ZoneSet) -> str | None:
    """Id of the zone containing the school's point, or None.

    Boundary points are inside; a point on a shared boundary goes to the
    lexicographically smallest zone id.
    """
    for zone in sorted(zone_set.zones, key=lambda z: z.id):
        if zone.contains(school.location):
            return zone.id
    return None


def collective_burden(
    scores: Iterable[BurdenScore],
    assignment: Mapping[str, str | None],
    zone_set: ZoneSet,
) -> list[ZoneBurden]:
    """Zone rollup: cpb = sum of member school scores, in ascending school-id order.

    Every zone in the set appears in the result (zero-school zones report
    cpb 0). Schools mapped to None are skipped; a score whose school is
    missing from the assignment is an error.
    """
    scores = sorted(scores, key=lambda s: s.school_id)
    members: dict[str, list[BurdenScore]] = {z.id: [] for z in zone_set.zones}
    for score in scores:
        if score.school_id not in assignment:
            raise ValueError(f"school {score.school_id} has no zone assignment entry")
        zone_id = assignment[score.school_id]
        if zone_id is None:
            continue
        if zone_id not in members:
            raise ValueError(
                f"school {score.school_id} assigned to unknown zone {zone_id!r}"
            )
        members[zone_id].append(score)

    out = []
    for zone_id in sorted(members):
        zone_scores = members[zone_id]
        cpb = 0.0
        for s in zone_scores:
            cpb += s.score
        out.append(
            ZoneBurden(
                zone_id=zone_id,
                scale=zone_set.scale,
                cpb=cpb,
                n_schools=len(zone_scores),
                school_ids=tuple(s.school_id for s in zone_scores),
            )
        )
    return out
