"""Descriptive statistics over classified burden surfaces.

Covers the demographic-disparity summary (who sits in each burden class),
plain correlation helpers, and the cross-scale comparison showing how the
same run classifies differently at community-area vs census-tract scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .classify import ClassifiedSurface
from .errors import UndefinedStatisticError
from .geo import GeoPoint, Polygon, point_in_polygon
from .ingest import School, Zone, ZoneSet

PREDOMINANT_SHARE = 0.5  # "predominantly Latinx" flag threshold


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Sample Pearson correlation. Raises for constant or too-short series."""
    xs = [float(x) for x in xs]
    ys = [float(y) for y in ys]
    if len(xs) != len(ys):
        raise ValueError(f"series lengths differ: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        raise UndefinedStatisticError("correlation needs at least two observations")
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    den_x = math.fsum(d * d for d in dx)
    den_y = math.fsum(d * d for d in dy)
    if den_x == 0.0 or den_y == 0.0:
        raise UndefinedStatisticError("correlation is undefined for a constant series")
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(den_x * den_y)
    return max(-1.0, min(1.0, r))


def _mean_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; ties share the mean of the ranks they span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j + 2) / 2
        for t in range(i, j + 1):
            ranks[order[t]] = shared
        i = j + 1
    return ranks


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation (mean ranks for ties)."""
    if len(xs) != len(ys):
        raise ValueError(f"series lengths differ: {len(xs)} vs {len(ys)}")
    return pearson(_mean_ranks(xs), _mean_ranks(ys))


@dataclass(frozen=True)
class ClassDemographicsRow:
    class_index: int
    label: str
    n_zones: int
    n_missing_share: int
    mean_latinx_share: float | None
    min_latinx_share: float | None
    weighted_school_latinx_share: float | None
    n_predominantly_latinx: int

    def to_dict(self) -> dict:
        return {
            "class_index": self.class_index,
            "label": self.label,
            "n_zones": self.n_zones,
            "n_missing_share": self.n_missing_share,
            "mean_latinx_share": self.mean_latinx_share,
            "min_latinx_share": self.min_latinx_share,
            "weighted_school_latinx_share": self.weighted_school_latinx_share,
            "n_predominantly_latinx": self.n_predominantly_latinx,
        }


@dataclass(frozen=True)
class ClassDemographics:
    scale: str
    method: str
    k: int
    rows: tuple[ClassDemographicsRow, ...]

    def __post_init__(self):
        if len(self.rows) != self.k:
            raise ValueError("one demographics row per class required")

    def to_dict(self) -> dict:
        return {
            "scale": self.scale,
            "method": self.method,
            "k": self.k,
            "classes": [r.to_dict() for r in self.rows],
        }


def class_demographics(
    surface: ClassifiedSurface,
    schools: Sequence[School],
    assignment: Mapping[str, str | None],
    zone_set: ZoneSet,
) -> ClassDemographics:
    """Demographic profile of each burden class.

    Zone-level shares come from the zone set; zones without a share are
    excluded from the mean/min and tallied in n_missing_share. The weighted
    school share uses total enrollment as the weight over schools assigned
    to the class's zones.
    """
    zones_by_id = zone_set.by_id()
    class_of_zone: dict[str, int] = {}
    for zb, ci in zip(surface.burdens, surface.class_indices):
        class_of_zone[zb.zone_id] = ci

    k = surface.break_set.k
    rows = []
    for ci in range(k):
        zone_ids = sorted(z for z, c in class_of_zone.items() if c == ci)
        shares = []
        missing = 0
        predominant = 0
        for zid in zone_ids:
            share = zones_by_id[zid].latinx_share
            if share is None:
                missing += 1
                continue
            shares.append(share)
            if share > PREDOMINANT_SHARE:
                predominant += 1

        weight_sum = 0.0
        weighted = 0.0
        for school in sorted(schools, key=lambda s: s.id):
            zid = assignment.get(school.id)
            if zid is None or class_of_zone.get(zid) != ci:
                continue
            if school.latinx_share is None or school.total_students == 0:
                continue
            weight_sum += school.total_students
            weighted += school.total_students * school.latinx_share

        rows.append(
            ClassDemographicsRow(
                class_index=ci,
                label=surface.break_set.labels[ci],
                n_zones=len(zone_ids),
                n_missing_share=missing,
                mean_latinx_share=math.fsum(shares) / len(shares) if shares else None,
                min_latinx_share=min(shares) if shares else None,
                weighted_school_latinx_share=(
                    weighted / weight_sum if weight_sum > 0 else None
                ),
                n_predominantly_latinx=predominant,
            )
        )
    return ClassDemographics(
        scale=surface.burdens[0].scale if surface.burdens else "",
        method=surface.break_set.method,
        k=k,
        rows=tuple(rows),
    )


def _ring_centroid(ring: tuple[GeoPoint, ...]) -> GeoPoint | None:
    """Shoelace area centroid in coordinate space; None for degenerate rings."""
    area2 = 0.0
    cx = 0.0
    cy = 0.0
    for p, q in zip(ring, ring[1:]):
        cross = p.lon * q.lat - q.lon * p.lat
        area2 += cross
        cx += (p.lon + q.lon) * cross
        cy += (p.lat + q.lat) * cross
    if area2 == 0.0:
        return None
    return GeoPoint(cx / (3.0 * area2), cy / (3.0 * area2))


def _scanline_point(poly: Polygon) -> GeoPoint | None:
    """Midpoint of an interior span on the horizontal line through the bbox middle.

    Crossings are collected from every ring (outer and holes) so the
    even-odd spans alternate material/void correctly for zones with holes.
    """
    lats = [p.lat for p in poly.outer]
    mid = (min(lats) + max(lats)) / 2.0
    xs = []
    for ring in poly.rings():
        for p, q in zip(ring, ring[1:]):
            if (p.lat > mid) != (q.lat > mid):
                t = (mid - p.lat) / (q.lat - p.lat)
                xs.append(p.lon + t * (q.lon - p.lon))
    xs.sort()
    for lo, hi in zip(xs[0::2], xs[1::2]):
        candidate = GeoPoint((lo + hi) / 2.0, mid)
        if point_in_polygon(candidate, poly):
            return candidate
    return None


def representative_point(zone: Zone) -> GeoPoint | None:
    """A point guaranteed (checked) to lie inside the zone, for containment tests."""
    for poly in zone.polygons:
        centroid = _ring_centroid(poly.outer)
        if centroid is not None and point_in_polygon(centroid, poly):
            return centroid
        fallback = _scanline_point(poly)
        if fallback is not None:
            return fallback
    return None


def containment_map(fine: ZoneSet, coarse: ZoneSet) -> dict[str, str | None]:
    """fine-zone id -> id of the coarse zone containing its representative point.

    Zones whose point lands in no coarse zone (or that have no usable
    representative point) map to None.
    """
    coarse_sorted = sorted(coarse.zones, key=lambda z: z.id)
    out: dict[str, str | None] = {}
    for zone in sorted(fine.zones, key=lambda z: z.id):
        point = representative_point(zone)
        parent = None
        if point is not None:
            for cz in coarse_sorted:
                if cz.contains(point):
                    parent = cz.id
                    break
        out[zone.id] = parent
    return out


@dataclass(frozen=True)
class DiscordantZone:
    zone_id: str
    class_index: int
    parent_id: str
    parent_class_index: int

    def to_dict(self) -> dict:
        return {
            "zone_id": self.zone_id,
            "class_index": self.class_index,
            "parent_id": self.parent_id,
            "parent_class_index": self.parent_class_index,
        }


@dataclass(frozen=True)
class MaupReport:
    coarse_scale: str
    fine_scale: str
    method: str
    k: int
    coarse_histogram: tuple[int, ...]
    fine_histogram: tuple[int, ...]
    rank_correlation: float
    discordant: tuple[DiscordantZone, ...]
    unmapped: tuple[str, ...]

    def __post_init__(self):
        if not -1.0 <= self.rank_correlation <= 1.0:
            raise ValueError("rank correlation outside [-1, 1]")

    def to_dict(self) -> dict:
        return {
            "coarse_scale": self.coarse_scale,
            "fine_scale": self.fine_scale,
            "method": self.method,
            "k": self.k,
            "coarse_histogram": list(self.coarse_histogram),
            "fine_histogram": list(self.fine_histogram),
            "rank_correlation": self.rank_correlation,
            "n_discordant": len(self.discordant),
            "discordant": [d.to_dict() for d in self.discordant],
            "unmapped": list(self.unmapped),
        }


def _histogram(surface: ClassifiedSurface) -> tuple[int, ...]:
    counts = [0] * surface.break_set.k
    for ci in surface.class_indices:
        counts[ci] += 1
    return tuple(counts)


def maup_compare(
    coarse_surface: ClassifiedSurface,
    fine_surface: ClassifiedSurface,
    fine_to_coarse: Mapping[str, str | None],
) -> MaupReport:
    """How the same burden run reads at two zone scales.

    Correlates each fine zone's cpb with its parent coarse zone's cpb
    (Spearman), and lists fine zones whose class differs from the parent's.
    Fine zones without a parent are reported as unmapped and excluded.
    """
    coarse_class: dict[str, int] = {}
    coarse_cpb: dict[str, float] = {}
    for zb, ci in zip(coarse_surface.burdens, coarse_surface.class_indices):
        coarse_class[zb.zone_id] = ci
        coarse_cpb[zb.zone_id] = zb.cpb

    fine_vals: list[float] = []
    parent_vals: list[float] = []
    discordant: list[DiscordantZone] = []
    unmapped: list[str] = []
    pairs = sorted(
        zip(fine_surface.burdens, fine_surface.class_indices), key=lambda p: p[0].zone_id
    )
    for zb, ci in pairs:
        parent = fine_to_coarse.get(zb.zone_id)
        if parent is None or parent not in coarse_class:
            unmapped.append(zb.zone_id)
            continue
        fine_vals.append(zb.cpb)
        parent_vals.append(coarse_cpb[parent])
        if ci != coarse_class[parent]:
            discordant.append(
                DiscordantZone(
                    zone_id=zb.zone_id,
                    class_index=ci,
                    parent_id=parent,
                    parent_class_index=coarse_class[parent],
                )
            )

    rho = spearman(fine_vals, parent_vals)
    return MaupReport(
        coarse_scale=coarse_surface.burdens[0].scale if coarse_surface.burdens else "",
        fine_scale=fine_surface.burdens[0].scale if fine_surface.burdens else "",
        method=fine_surface.break_set.method,
        k=fine_surface.break_set.k,
        coarse_histogram=_histogram(coarse_surface),
        fine_histogram=_histogram(fine_surface),
        rank_correlation=rho,
        discordant=tuple(discordant),
        unmapped=tuple(unmapped),
    )
