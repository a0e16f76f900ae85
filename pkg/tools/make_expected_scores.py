#!/usr/bin/env python3
"""Build the frozen high-precision expectations for the bundled fixture.

Recomputes every per-school exposure and score with 50-digit arithmetic
(mpmath) and exact rationals (fractions), entirely independent of the
package's float64 code paths, then freezes the results into
tests/data/expected_scores.json. Zone membership is decided with exact
rational comparisons against the coordinate text in the GeoJSON files.

Also prints reference distances for two fixed point pairs (computed with
the spherical law-of-cosines/atan2 form rather than the haversine form)
for use as literal expectations in the distance tests.
"""
from __future__ import annotations

import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from mpmath import mp, mpf, atan2, cos, sin, sqrt, pi

ROOT = Path(__file__).resolve().parent.parent
FIXTURE = ROOT / "fixture"
OUT = ROOT / "tests" / "data" / "expected_scores.json"

mp.dps = 50

R = mpf("6371008.8")
RADIUS = mpf("1609.344")


def rad(deg):
    return deg * pi / 180


def dist_sphere(lon1, lat1, lon2, lat2):
    """Great-circle distance via the atan2 (Vincenty-on-sphere) form."""
    p1, p2 = rad(lat1), rad(lat2)
    dl = rad(lon2) - rad(lon1)
    num = sqrt((cos(p2) * sin(dl)) ** 2 + (cos(p1) * sin(p2) - sin(p1) * cos(p2) * cos(dl)) ** 2)
    den = sin(p1) * sin(p2) + cos(p1) * cos(p2) * cos(dl)
    return R * atan2(num, den)


def project(lon0, lat0, lon, lat):
    x = rad(lon - lon0) * R * cos(rad(lat0))
    y = rad(lat - lat0) * R
    return x, y


def clip_segment(x1, y1, x2, y2, r):
    """Length of one planar segment inside the origin-centred disc."""
    dx, dy = x2 - x1, y2 - y1
    a = dx * dx + dy * dy
    if a == 0:
        return mpf(0)
    b = x1 * dx + y1 * dy
    c = x1 * x1 + y1 * y1 - r * r
    disc = b * b - a * c
    if disc <= 0:
        return mpf(0)
    root = sqrt(disc)
    t1 = (-b - root) / a
    t2 = (-b + root) / a
    lo = max(t1, mpf(0))
    hi = min(t2, mpf(1))
    if hi <= lo:
        return mpf(0)
    return (hi - lo) * sqrt(a)


def load_json(path, rational=False):
    if rational:
        return json.loads(path.read_text(encoding="utf-8"), parse_float=Fraction, parse_int=Fraction)
    return json.loads(path.read_text(encoding="utf-8"))


def line_parts(geometry):
    if geometry["type"] == "LineString":
        return [geometry["coordinates"]]
    if geometry["type"] == "MultiLineString":
        return list(geometry["coordinates"])
    raise ValueError(geometry["type"])


def polygon_rings(geometry):
    if geometry["type"] == "Polygon":
        return [geometry["coordinates"]]
    if geometry["type"] == "MultiPolygon":
        return list(geometry["coordinates"])
    raise ValueError(geometry["type"])


def zone_contains(rings, lon, lat):
    """Exact containment for the fixture's axis-aligned rectangles."""
    for polygon in rings:
        outer = polygon[0]
        lons = [c[0] for c in outer]
        lats = [c[1] for c in outer]
        if min(lons) <= lon <= max(lons) and min(lats) <= lat <= max(lats):
            return True
    return False


def main():
    schools = []
    with open(FIXTURE / "schools.csv", newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            schools.append(row)
    schools.sort(key=lambda r: r["school_id"])

    roads = load_json(FIXTURE / "industrial_roads.geojson")
    facilities = load_json(FIXTURE / "tri_facilities.geojson")
    zones = {
        "community_area": ("area_num", load_json(FIXTURE / "community_areas.geojson", rational=True)),
        "census_tract": ("tract_id", load_json(FIXTURE / "census_tracts.geojson", rational=True)),
    }

    expected = {}
    min_count_margin = None
    cpb = {"community_area": {}, "census_tract": {}}

    for row in schools:
        sid = row["school_id"]
        lon_f = Fraction(row["longitude"])
        lat_f = Fraction(row["latitude"])
        lon = mpf(row["longitude"])
        lat = mpf(row["latitude"])
        total = int(row["enrollment_total"])
        nbhd = int(row["enrollment_neighborhood"])
        pss = Fraction(nbhd, total) if total > 0 else None

        # clipped road kilometres, grouped per feature for reporting sanity
        road_m = mpf(0)
        for feat in roads["features"]:
            for part in line_parts(feat["geometry"]):
                pts = [project(lon, lat, mpf(repr(float(c[0]))), mpf(repr(float(c[1])))) for c in part]
                for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
                    road_m += clip_segment(x1, y1, x2, y2, RADIUS)
        road_km = road_m / 1000

        count = 0
        for feat in facilities["features"]:
            c = feat["geometry"]["coordinates"]
            d = dist_sphere(lon, lat, mpf(repr(float(c[0]))), mpf(repr(float(c[1]))))
            margin = abs(d - RADIUS)
            if min_count_margin is None or margin < min_count_margin:
                min_count_margin = margin
            if d <= RADIUS:
                count += 1

        assignment = {}
        for scale, (id_prop, doc) in zones.items():
            found = []
            for feat in doc["features"]:
                if zone_contains(polygon_rings(feat["geometry"]), lon_f, lat_f):
                    found.append(str(feat["properties"][id_prop]))
            assignment[scale] = min(found) if found else None

        entry = {
            "pss": f"{pss.numerator}/{pss.denominator}" if pss is not None else None,
            "zone": assignment,
            "hs": {
                "industrial_roads": mp.nstr(road_km, 30),
                "tri_facilities": count,
            },
            "score": None,
        }
        if pss is not None:
            pss_mp = mpf(pss.numerator) / mpf(pss.denominator)
            entry["score"] = {
                "industrial_roads": mp.nstr(pss_mp * road_km, 30),
                "tri_facilities": mp.nstr(pss_mp * count, 30),
            }
            for scale in cpb:
                z = assignment[scale]
                if z is not None:
                    cpb[scale][z] = cpb[scale].get(z, mpf(0)) + pss_mp * road_km
        expected[sid] = entry

    # zones with no scored schools still owe an exact-zero burden
    for scale, (id_prop, doc) in zones.items():
        for feat in doc["features"]:
            cpb[scale].setdefault(str(feat["properties"][id_prop]), mpf(0))

    doc = {
        "radius_m": "1609.344",
        "layer_ids": ["industrial_roads", "tri_facilities"],
        "schools": expected,
        "zone_cpb": {
            scale: {z: mp.nstr(v, 30) for z, v in sorted(vals.items())}
            for scale, vals in cpb.items()
        },
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")

    print(f"wrote {OUT}")
    print(f"closest facility-to-radius margin: {mp.nstr(min_count_margin, 10)} m")
    print("reference distances (atan2 spherical form):")
    pairs = [
        ((-87.6298, 41.8781), (-87.6051, 41.7943)),  # downtown-ish to south side
        ((-87.80, 41.75), (-87.56, 41.95)),          # fixture grid corners
    ]
    for (lon1, lat1), (lon2, lat2) in pairs:
        d = dist_sphere(mpf(repr(lon1)), mpf(repr(lat1)), mpf(repr(lon2)), mpf(repr(lat2)))
        print(f"  ({lon1},{lat1}) -> ({lon2},{lat2}): {mp.nstr(d, 25)} m")


if __name__ == "__main__":
    sys.exit(main())
