"""Geometry primitives and spatial predicates on WGS84 coordinates.

Distances use a sphere of mean radius 6,371,008.8 m. Planar work
(segment clipping, minimum distances) happens in a local equirectangular
projection centered on the point of interest; within a couple of
kilometers of the origin the distortion is far below parcel-level data
noise, which is the scale everything here operates at.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

EARTH_RADIUS_M = 6_371_008.8
MILE_M = 1609.344  # international mile


@dataclass(frozen=True, slots=True)
class GeoPoint:
    """A WGS84 longitude/latitude pair, in degrees."""

    lon: float
    lat: float

    def __post_init__(self):
        if not (math.isfinite(self.lon) and math.isfinite(self.lat)):
            raise ValueError(f"non-finite coordinate ({self.lon}, {self.lat})")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} outside [-180, 180]")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")


class PlanarPoint(NamedTuple):
    """Local-projection coordinates in meters (x east, y north)."""

    x: float
    y: float


@dataclass(frozen=True, slots=True)
class Polyline:
    """An ordered vertex chain. Zero-length segments are allowed and contribute 0."""

    points: tuple[GeoPoint, ...]

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("polyline needs at least 2 vertices")


@dataclass(frozen=True, slots=True)
class Polygon:
    """One outer ring plus optional holes; every ring is closed (first == last)."""

    outer: tuple[GeoPoint, ...]
    holes: tuple[tuple[GeoPoint, ...], ...] = ()

    def __post_init__(self):
        _check_ring(self.outer)
        for ring in self.holes:
            _check_ring(ring)

    def rings(self):
        yield self.outer
        yield from self.holes


def _check_ring(ring: tuple[GeoPoint, ...]) -> None:
    if len(ring) < 4:
        raise ValueError(f"ring needs at least 4 points, got {len(ring)}")
    first, last = ring[0], ring[-1]
    if first.lon != last.lon or first.lat != last.lat:
        raise ValueError("ring is not closed (first point != last point)")


def haversine_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in meters on the mean-radius sphere."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def local_project(origin: GeoPoint, p: GeoPoint) -> PlanarPoint:
    """Equirectangular projection of p about origin, in meters.

    Valid for points within ~10 km of the origin; callers enforce that.
    """
    x = EARTH_RADIUS_M * math.radians(p.lon - origin.lon) * math.cos(math.radians(origin.lat))
    y = EARTH_RADIUS_M * math.radians(p.lat - origin.lat)
    return PlanarPoint(x, y)


def planar_offset(origin: GeoPoint, x: float, y: float) -> GeoPoint:
    """Inverse of local_project: the GeoPoint at planar (x, y) meters from origin."""
    lon = origin.lon + math.degrees(x / (EARTH_RADIUS_M * math.cos(math.radians(origin.lat))))
    lat = origin.lat + math.degrees(y / EARTH_RADIUS_M)
    return GeoPoint(lon, lat)


def _segment_length_in_disc(x1: float, y1: float, x2: float, y2: float, r: float) -> float:
    # Length of {p1 + t*(p2-p1), t in [0,1]} inside the closed disc |p| <= r.
    dx = x2 - x1
    dy = y2 - y1
    a = dx * dx + dy * dy
    if a == 0.0:
        return 0.0
    b = x1 * dx + y1 * dy
    c = x1 * x1 + y1 * y1 - r * r
    disc = b * b - a * c
    if disc <= 0.0:
        return 0.0
    root = math.sqrt(disc)
    t_lo = (-b - root) / a
    t_hi = (-b + root) / a
    lo = max(t_lo, 0.0)
    hi = min(t_hi, 1.0)
    if hi <= lo:
        return 0.0
    return (hi - lo) * math.sqrt(a)


def clip_length_in_disc(center: GeoPoint, radius_m: float, line: Polyline) -> float:
    """Total length (meters) of the polyline's portions inside the closed disc.

    Works in the local projection about the disc center, so segments should
    stay within the projection's validity envelope.
    """
    if radius_m <= 0.0:
        raise ValueError(f"radius must be positive, got {radius_m}")
    total = 0.0
    prev = local_project(center, line.points[0])
    for pt in line.points[1:]:
        cur = local_project(center, pt)
        total += _segment_length_in_disc(prev.x, prev.y, cur.x, cur.y, radius_m)
        prev = cur
    return total


def planar_length(center: GeoPoint, line: Polyline) -> float:
    """Polyline length in meters after projecting about center."""
    total = 0.0
    prev = local_project(center, line.points[0])
    for pt in line.points[1:]:
        cur = local_project(center, pt)
        total += math.hypot(cur.x - prev.x, cur.y - prev.y)
        prev = cur
    return total


def _on_segment(px: float, py: float, x1: float, y1: float, x2: float, y2: float) -> bool:
    cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
    if cross != 0.0:
        return False
    return min(x1, x2) <= px <= max(x1, x2) and min(y1, y2) <= py <= max(y1, y2)


def _ring_crossings(px: float, py: float, ring: tuple[GeoPoint, ...]) -> int:
    # Even-odd ray cast: horizontal ray to +x, half-open vertex rule.
    count = 0
    for i in range(len(ring) - 1):
        y1 = ring[i].lat
        y2 = ring[i + 1].lat
        if (y1 > py) == (y2 > py):
            continue
        x1 = ring[i].lon
        x2 = ring[i + 1].lon
        x_int = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        if px < x_int:
            count += 1
    return count


def point_on_polygon_boundary(p: GeoPoint, poly: Polygon) -> bool:
    """True when p lies exactly on any ring edge (in lon/lat coordinates)."""
    for ring in poly.rings():
        for i in range(len(ring) - 1):
            if _on_segment(p.lon, p.lat, ring[i].lon, ring[i].lat, ring[i + 1].lon, ring[i + 1].lat):
                return True
    return False


def point_in_polygon(p: GeoPoint, poly: Polygon) -> bool:
    """Even-odd containment on lon/lat coordinates.

    A point inside a hole is outside; points exactly on any boundary
    (including hole boundaries) count as inside, deterministically.
    """
    if point_on_polygon_boundary(p, poly):
        return True
    crossings = _ring_crossings(p.lon, p.lat, poly.outer)
    for hole in poly.holes:
        crossings += _ring_crossings(p.lon, p.lat, hole)
    return crossings % 2 == 1


def _origin_segment_distance(x1: float, y1: float, x2: float, y2: float) -> float:
    dx = x2 - x1
    dy = y2 - y1
    a = dx * dx + dy * dy
    if a == 0.0:
        return math.hypot(x1, y1)
    t = -(x1 * dx + y1 * dy) / a
    t = min(1.0, max(0.0, t))
    return math.hypot(x1 + t * dx, y1 + t * dy)


def min_distance_to_polyline(p: GeoPoint, line: Polyline) -> float:
    """Minimum planar distance (meters, projection about p) from p to the polyline."""
    best = math.inf
    prev = local_project(p, line.points[0])
    for pt in line.points[1:]:
        cur = local_project(p, pt)
        best = min(best, _origin_segment_distance(prev.x, prev.y, cur.x, cur.y))
        prev = cur
    return best


def min_distance_to_polygon(p: GeoPoint, poly: Polygon) -> float:
    """0 when p is inside (boundary included), else the minimum planar
    distance from p to any boundary segment."""
    if point_in_polygon(p, poly):
        return 0.0
    best = math.inf
    for ring in poly.rings():
        prev = local_project(p, ring[0])
        for pt in ring[1:]:
            cur = local_project(p, pt)
            best = min(best, _origin_segment_distance(prev.x, prev.y, cur.x, cur.y))
            prev = cur
    return best


def geometry_bbox(geom) -> tuple[float, float, float, float]:
    """(min_lon, min_lat, max_lon, max_lat) of a GeoPoint, Polyline, or Polygon."""
    if isinstance(geom, GeoPoint):
        return (geom.lon, geom.lat, geom.lon, geom.lat)
    if isinstance(geom, Polyline):
        pts = geom.points
    elif isinstance(geom, Polygon):
        pts = geom.outer  # holes lie inside the outer ring
    else:
        raise TypeError(f"no bbox for {type(geom).__name__}")
    lons = [pt.lon for pt in pts]
    lats = [pt.lat for pt in pts]
    return (min(lons), min(lats), max(lons), max(lats))
