"""Uniform-grid candidate index for radius queries over a feature layer.

The grid bins feature bounding boxes into square lon/lat cells sized to the
typical query radius. Queries return a superset of the features whose
geometry can intersect the disc; exact refinement is the caller's job
(geo module predicates). The index is immutable after build and safe for
concurrent readers.
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field

from .geo import EARTH_RADIUS_M, GeoPoint, geometry_bbox

# Queries expand their lon half-width by this factor so the linear
# radius->degrees conversion stays conservative at city scales.
_LON_SLACK = 1.05


@dataclass(frozen=True)
class FeatureIndex:
    cell_size_deg: float
    bins: dict[tuple[int, int], tuple[str, ...]]
    bboxes: dict[str, tuple[float, float, float, float]] = field(repr=False)

    @property
    def feature_ids(self) -> frozenset[str]:
        return frozenset(self.bboxes)


def _cell_range(lo: float, hi: float, cell: float) -> range:
    return range(math.floor(lo / cell), math.floor(hi / cell) + 1)


def build_index(features, cell_size_hint_m: float) -> FeatureIndex:
    """Index (feature_id, geometry) pairs; multi-part features may repeat an id.

    The cell size in degrees is the hint converted at the dataset's median
    latitude. An empty feature list yields a valid empty index.
    """
    if cell_size_hint_m <= 0:
        raise ValueError(f"cell size hint must be positive, got {cell_size_hint_m}")

    merged: dict[str, tuple[float, float, float, float]] = {}
    for feature_id, geom in features:
        bbox = geometry_bbox(geom)
        old = merged.get(feature_id)
        if old is not None:
            bbox = (
                min(old[0], bbox[0]),
                min(old[1], bbox[1]),
                max(old[2], bbox[2]),
                max(old[3], bbox[3]),
            )
        merged[feature_id] = bbox

    if merged:
        median_lat = statistics.median((b[1] + b[3]) / 2.0 for b in merged.values())
    else:
        median_lat = 0.0
    cos_lat = max(math.cos(math.radians(median_lat)), 0.05)
    cell_size_deg = math.degrees(cell_size_hint_m / (EARTH_RADIUS_M * cos_lat))

    cells: dict[tuple[int, int], list[str]] = {}
    for feature_id, (min_lon, min_lat, max_lon, max_lat) in merged.items():
        for ix in _cell_range(min_lon, max_lon, cell_size_deg):
            for iy in _cell_range(min_lat, max_lat, cell_size_deg):
                cells.setdefault((ix, iy), []).append(feature_id)

    bins = {key: tuple(sorted(ids)) for key, ids in cells.items()}
    return FeatureIndex(cell_size_deg=cell_size_deg, bins=bins, bboxes=merged)


def query_radius_candidates(index: FeatureIndex, center: GeoPoint, radius_m: float) -> list[str]:
    """Ids of all features whose bbox can touch the closed disc: a superset
    of the exact hits, in ascending id order."""
    if radius_m <= 0:
        raise ValueError(f"radius must be positive, got {radius_m}")
    if not index.bboxes:
        return []

    d_lat = math.degrees(radius_m / EARTH_RADIUS_M)
    worst_lat = min(89.9, abs(center.lat) + d_lat)
    cos_lat = max(math.cos(math.radians(worst_lat)), 0.05)
    d_lon = math.degrees(radius_m / (EARTH_RADIUS_M * cos_lat)) * _LON_SLACK

    hits: set[str] = set()
    cell = index.cell_size_deg
    for ix in _cell_range(center.lon - d_lon, center.lon + d_lon, cell):
        for iy in _cell_range(center.lat - d_lat, center.lat + d_lat, cell):
            bucket = index.bins.get((ix, iy))
            if bucket:
                hits.update(bucket)
    return sorted(hits)
