"""Spherical distance, local projection, disc clipping, and polygon tests.

The clipping checks compare against a sampling reference that walks each
segment in 1 cm steps and counts in-disc midpoints; the distance checks
compare against values precomputed with 50-digit spherical trigonometry
(atan2 form, a different formula family than the haversine under test).
"""
from __future__ import annotations

import math
import random

import numpy as np
import pytest

from proxburden.geo import (
    EARTH_RADIUS_M,
    MILE_M,
    GeoPoint,
    Polygon,
    Polyline,
    clip_length_in_disc,
    geometry_bbox,
    haversine_distance,
    local_project,
    min_distance_to_polygon,
    min_distance_to_polyline,
    planar_length,
    planar_offset,
    point_in_polygon,
)

# --- reference sampling oracle -------------------------------------------------


def sampled_clip_length(center: GeoPoint, radius_m: float, line: Polyline) -> float:
    """Midpoint sampling at <= 1 cm steps, vectorised per segment."""
    total = 0.0
    pts = [local_project(center, p) for p in line.points]
    for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
        seg = math.hypot(x2 - x1, y2 - y1)
        if seg == 0.0:
            continue
        n = max(1, math.ceil(seg / 0.01))
        t = (np.arange(n) + 0.5) / n
        mx = x1 + (x2 - x1) * t
        my = y1 + (y2 - y1) * t
        inside = (mx * mx + my * my) <= radius_m * radius_m
        total += seg / n * float(np.count_nonzero(inside))
    return total


def random_polyline(rng: random.Random, center: GeoPoint, radius: float) -> Polyline:
    """A polyline engineered to cross the disc boundary transversally.

    Starts outside, wanders through the middle: this keeps the clipped
    portion large relative to the sampling step so the 0.1% tolerance is
    meaningful rather than dominated by discretisation noise.
    """
    pts = []
    ang = rng.uniform(0, 2 * math.pi)
    d = radius * rng.uniform(1.05, 1.3)
    pts.append(planar_offset(center, d * math.cos(ang), d * math.sin(ang)))
    for _ in range(rng.randint(1, 3)):
        ang = rng.uniform(0, 2 * math.pi)
        d = radius * rng.uniform(0.0, 0.6)
        pts.append(planar_offset(center, d * math.cos(ang), d * math.sin(ang)))
    if rng.random() < 0.5:
        ang = rng.uniform(0, 2 * math.pi)
        d = radius * rng.uniform(1.05, 1.3)
        pts.append(planar_offset(center, d * math.cos(ang), d * math.sin(ang)))
    if len(pts) < 2:
        pts.append(planar_offset(center, 0.0, radius * 0.5))
    return Polyline(tuple(pts))


# --- haversine ------------------------------------------------------------------


class TestHaversine:
    def test_reference_pairs(self):
        # expectations computed beforehand with 50-digit spherical trig
        # using the atan2 formulation (see tools/make_expected_scores.py)
        cases = [
            ((-87.6298, 41.8781), (-87.6051, 41.7943), 9540.191039329138629559624),
            ((-87.80, 41.75), (-87.56, 41.95), 29828.52677042223419581724),
        ]
        for a, b, want in cases:
            got = haversine_distance(GeoPoint(*a), GeoPoint(*b))
            assert abs(got - want) / want <= 1e-9

    def test_zero_distance(self):
        p = GeoPoint(-87.65, 41.85)
        assert haversine_distance(p, p) == 0.0

    def test_symmetry(self):
        rng = random.Random(7)
        for _ in range(50):
            a = GeoPoint(rng.uniform(-180, 180), rng.uniform(-85, 85))
            b = GeoPoint(rng.uniform(-180, 180), rng.uniform(-85, 85))
            assert haversine_distance(a, b) == haversine_distance(b, a)

    def test_one_degree_latitude(self):
        d = haversine_distance(GeoPoint(-87.0, 41.0), GeoPoint(-87.0, 42.0))
        assert d == pytest.approx(EARTH_RADIUS_M * math.pi / 180, rel=1e-12)

    def test_triangle_inequality(self):
        rng = random.Random(11)
        for _ in range(50):
            pts = [GeoPoint(rng.uniform(-90, -80), rng.uniform(38, 45)) for _ in range(3)]
            ab = haversine_distance(pts[0], pts[1])
            bc = haversine_distance(pts[1], pts[2])
            ac = haversine_distance(pts[0], pts[2])
            assert ac <= ab + bc + 1e-9


class TestProjection:
    def test_origin_maps_to_zero(self):
        o = GeoPoint(-87.7, 41.8)
        assert local_project(o, o) == (0.0, 0.0)

    def test_known_northward_offset(self):
        o = GeoPoint(-87.7, 41.8)
        p = GeoPoint(-87.7, 41.81)
        x, y = local_project(o, p)
        assert x == 0.0
        assert y == pytest.approx(EARTH_RADIUS_M * math.radians(0.01), rel=1e-12)

    def test_eastward_offset_scales_with_cos(self):
        o = GeoPoint(-87.7, 41.8)
        p = GeoPoint(-87.69, 41.8)
        x, y = local_project(o, p)
        assert y == 0.0
        assert x == pytest.approx(
            EARTH_RADIUS_M * math.radians(0.01) * math.cos(math.radians(41.8)), rel=1e-12
        )

    def test_offset_round_trip(self):
        rng = random.Random(3)
        o = GeoPoint(-87.7, 41.8)
        for _ in range(100):
            x = rng.uniform(-3000, 3000)
            y = rng.uniform(-3000, 3000)
            px, py = local_project(o, planar_offset(o, x, y))
            assert px == pytest.approx(x, abs=1e-6)
            assert py == pytest.approx(y, abs=1e-6)

    def test_projected_distance_near_haversine_locally(self):
        rng = random.Random(5)
        o = GeoPoint(-87.7, 41.8)
        for _ in range(100):
            p = planar_offset(o, rng.uniform(-2000, 2000), rng.uniform(-2000, 2000))
            x, y = local_project(o, p)
            planar = math.hypot(x, y)
            sphere = haversine_distance(o, p)
            if sphere > 1.0:
                assert abs(planar - sphere) / sphere < 2e-3


class TestClipLength:
    CENTER = GeoPoint(-87.66, 41.84)

    def test_chord_through_center_is_diameter(self):
        r = 500.0
        line = Polyline(
            (planar_offset(self.CENTER, 0.0, -2 * r), planar_offset(self.CENTER, 0.0, 2 * r))
        )
        got = clip_length_in_disc(self.CENTER, r, line)
        assert abs(got - 2 * r) / (2 * r) <= 1e-6

    def test_fully_inside_equals_planar_length(self):
        line = Polyline(
            (
                planar_offset(self.CENTER, -100.0, -50.0),
                planar_offset(self.CENTER, 80.0, 20.0),
                planar_offset(self.CENTER, 150.0, -90.0),
            )
        )
        got = clip_length_in_disc(self.CENTER, 1000.0, line)
        assert got == pytest.approx(planar_length(self.CENTER, line), rel=1e-12)

    def test_fully_outside_is_exactly_zero(self):
        line = Polyline(
            (planar_offset(self.CENTER, 2000.0, -500.0), planar_offset(self.CENTER, 2000.0, 500.0))
        )
        assert clip_length_in_disc(self.CENTER, 1000.0, line) == 0.0

    def test_grazing_line_contributes_negligibly(self):
        # a line at the tangent height: round-tripping through lon/lat moves
        # it by nanometres, and the chord grows as sqrt of that, so allow cm
        r = 800.0
        line = Polyline(
            (planar_offset(self.CENTER, -900.0, r), planar_offset(self.CENTER, 900.0, r))
        )
        assert clip_length_in_disc(self.CENTER, r, line) <= 0.2

    def test_line_just_outside_is_exactly_zero(self):
        r = 800.0
        line = Polyline(
            (planar_offset(self.CENTER, -900.0, r + 0.5), planar_offset(self.CENTER, 900.0, r + 0.5))
        )
        assert clip_length_in_disc(self.CENTER, r, line) == 0.0

    def test_zero_length_segment_is_zero(self):
        p = planar_offset(self.CENTER, 10.0, 10.0)
        assert clip_length_in_disc(self.CENTER, 500.0, Polyline((p, p))) == 0.0

    def test_segment_split_invariance(self):
        # splitting a segment at an interior vertex must not change the clip
        rng = random.Random(17)
        for _ in range(50):
            a = planar_offset(self.CENTER, rng.uniform(-900, 900), rng.uniform(-900, 900))
            b = planar_offset(self.CENTER, rng.uniform(-900, 900), rng.uniform(-900, 900))
            ax, ay = local_project(self.CENTER, a)
            bx, by = local_project(self.CENTER, b)
            t = rng.uniform(0.2, 0.8)
            mid = planar_offset(self.CENTER, ax + (bx - ax) * t, ay + (by - ay) * t)
            whole = clip_length_in_disc(self.CENTER, 600.0, Polyline((a, b)))
            split = clip_length_in_disc(self.CENTER, 600.0, Polyline((a, mid, b)))
            assert split == pytest.approx(whole, rel=1e-9, abs=1e-9)

    def test_matches_sampling_reference(self):
        rng = random.Random(29)
        for _ in range(100):
            radius = rng.uniform(100.0, 300.0)
            line = random_polyline(rng, self.CENTER, radius)
            got = clip_length_in_disc(self.CENTER, radius, line)
            ref = sampled_clip_length(self.CENTER, radius, line)
            assert got == pytest.approx(ref, rel=1e-3, abs=0.05)

    def test_radius_monotone(self):
        rng = random.Random(31)
        for _ in range(50):
            line = random_polyline(rng, self.CENTER, 400.0)
            radii = sorted(rng.uniform(50.0, 900.0) for _ in range(4))
            clips = [clip_length_in_disc(self.CENTER, r, line) for r in radii]
            assert clips == sorted(clips)


def box(lon0: float, lat0: float, lon1: float, lat1: float) -> tuple[GeoPoint, ...]:
    return (
        GeoPoint(lon0, lat0),
        GeoPoint(lon1, lat0),
        GeoPoint(lon1, lat1),
        GeoPoint(lon0, lat1),
        GeoPoint(lon0, lat0),
    )


class TestPointInPolygon:
    def test_interior_and_exterior(self):
        poly = Polygon(box(-87.71, 41.79, -87.69, 41.81))
        assert point_in_polygon(GeoPoint(-87.7, 41.8), poly)
        assert not point_in_polygon(GeoPoint(-87.75, 41.8), poly)

    def test_boundary_is_inside(self):
        poly = Polygon(box(-87.71, 41.79, -87.69, 41.81))
        assert point_in_polygon(GeoPoint(-87.71, 41.8), poly)  # edge
        assert point_in_polygon(GeoPoint(-87.71, 41.81), poly)  # vertex

    def test_hole_excludes_interior_but_not_its_rim(self):
        outer = box(-87.71, 41.79, -87.69, 41.81)
        hole = box(-87.702, 41.798, -87.698, 41.802)
        poly = Polygon(outer, (hole,))
        assert not point_in_polygon(GeoPoint(-87.7, 41.8), poly)
        assert point_in_polygon(GeoPoint(-87.702, 41.8), poly)  # on hole rim
        assert point_in_polygon(GeoPoint(-87.705, 41.8), poly)  # in the ring of material

    def test_concave_shape(self):
        # a U shape: the notch between the prongs is outside
        pts = [
            (-87.71, 41.79), (-87.69, 41.79), (-87.69, 41.81), (-87.695, 41.81),
            (-87.695, 41.795), (-87.705, 41.795), (-87.705, 41.81), (-87.71, 41.81),
            (-87.71, 41.79),
        ]
        poly = Polygon(tuple(GeoPoint(*p) for p in pts))
        assert not point_in_polygon(GeoPoint(-87.70, 41.805), poly)
        assert point_in_polygon(GeoPoint(-87.70, 41.792), poly)

    def test_ray_through_vertex_counts_once(self):
        # diamond whose west vertex lies exactly on the test ray's latitude
        poly = Polygon(
            (
                GeoPoint(-87.70, 41.80),
                GeoPoint(-87.69, 41.81),
                GeoPoint(-87.68, 41.80),
                GeoPoint(-87.69, 41.79),
                GeoPoint(-87.70, 41.80),
            )
        )
        assert not point_in_polygon(GeoPoint(-87.72, 41.80), poly)
        assert point_in_polygon(GeoPoint(-87.69, 41.80), poly)


class TestMinDistance:
    def test_point_inside_polygon_is_zero(self):
        poly = Polygon(box(-87.71, 41.79, -87.69, 41.81))
        assert min_distance_to_polygon(GeoPoint(-87.7, 41.8), poly) == 0.0

    def test_perpendicular_distance_to_edge(self):
        c = GeoPoint(-87.7, 41.8)
        line = Polyline((planar_offset(c, -500.0, 300.0), planar_offset(c, 500.0, 300.0)))
        assert min_distance_to_polyline(c, line) == pytest.approx(300.0, rel=1e-6)

    def test_nearest_is_a_vertex(self):
        c = GeoPoint(-87.7, 41.8)
        line = Polyline((planar_offset(c, 400.0, 300.0), planar_offset(c, 900.0, 300.0)))
        assert min_distance_to_polyline(c, line) == pytest.approx(500.0, rel=1e-6)

    def test_polygon_distance_from_outside(self):
        c = GeoPoint(-87.7, 41.8)
        corners = [(200.0, -100.0), (400.0, -100.0), (400.0, 100.0), (200.0, 100.0)]
        ring = tuple(planar_offset(c, x, y) for x, y in corners + [corners[0]])
        assert min_distance_to_polygon(c, Polygon(ring)) == pytest.approx(200.0, rel=1e-6)

    def test_matches_boundary_sampling(self):
        rng = random.Random(41)
        c = GeoPoint(-87.7, 41.8)
        for _ in range(25):
            corners = []
            base_ang = rng.uniform(0, 2 * math.pi)
            cx, cy = rng.uniform(-800, 800), rng.uniform(-800, 800)
            for i in range(5):
                ang = base_ang + 2 * math.pi * i / 5
                rad = rng.uniform(100, 400)
                corners.append((cx + rad * math.cos(ang), cy + rad * math.sin(ang)))
            ring = tuple(planar_offset(c, x, y) for x, y in corners + [corners[0]])
            poly = Polygon(ring)
            got = min_distance_to_polygon(c, poly)
            # dense boundary sampling reference
            best = math.inf
            for (x1, y1), (x2, y2) in zip(corners, corners[1:] + corners[:1]):
                seg = math.hypot(x2 - x1, y2 - y1)
                n = max(2, math.ceil(seg / 0.05))
                for i in range(n + 1):
                    t = i / n
                    best = min(best, math.hypot(x1 + (x2 - x1) * t, y1 + (y2 - y1) * t))
            if point_in_polygon(c, poly):
                assert got == 0.0
            else:
                assert got == pytest.approx(best, rel=1e-3, abs=0.1)


class TestBbox:
    def test_point_bbox_is_degenerate(self):
        p = GeoPoint(-87.7, 41.8)
        assert geometry_bbox(p) == (-87.7, 41.8, -87.7, 41.8)

    def test_polyline_bbox(self):
        line = Polyline((GeoPoint(-87.72, 41.79), GeoPoint(-87.68, 41.83), GeoPoint(-87.70, 41.78)))
        assert geometry_bbox(line) == (-87.72, 41.78, -87.68, 41.83)

    def test_polygon_bbox_covers_outer_ring(self):
        poly = Polygon(
            box(-87.71, 41.79, -87.69, 41.81),
            (box(-87.702, 41.798, -87.698, 41.802),),
        )
        assert geometry_bbox(poly) == (-87.71, 41.79, -87.69, 41.81)
