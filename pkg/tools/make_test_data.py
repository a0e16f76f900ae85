#!/usr/bin/env python3
"""Write tests/data/community_areas_76.geojson.

A deterministic 76-feature MultiPolygon boundary file with the same
shape profile as a city-wide community-area export: irregular polygon
outlines on a grid, a handful of two-part areas, a couple of areas with
interior holes, and occasional missing demographic attributes. Used by
the parser tests as a zero-validation-error corpus.
"""
from __future__ import annotations

import json
import math
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "community_areas_76.geojson"

LON0, LAT0 = -88.0, 41.60
DLON, DLAT = 0.11, 0.085
COLS = 10


def ring(cx, cy, rx, ry, n, phase):
    pts = []
    for i in range(n):
        ang = phase + 2 * math.pi * i / n
        # deterministic irregularity so outlines are not perfect ellipses
        wobble = 1.0 + 0.18 * math.sin(3 * ang + phase) + 0.07 * math.cos(5 * ang)
        pts.append([round(cx + rx * wobble * math.cos(ang), 5),
                    round(cy + ry * wobble * math.sin(ang), 5)])
    pts.append(list(pts[0]))
    return pts


def main():
    features = []
    for i in range(76):
        num = i + 1
        col, row = i % COLS, i // COLS
        cx = LON0 + (col + 0.5) * DLON
        cy = LAT0 + (row + 0.5) * DLAT
        n_vertices = 6 + (i % 5)
        outer = ring(cx, cy, 0.042, 0.033, n_vertices, 0.37 * num)
        rings = [outer]
        if num % 19 == 0:
            rings.append(ring(cx, cy, 0.011, 0.009, 5, 1.1 * num)[::-1])
        parts = [rings]
        if num % 7 == 0:
            parts.append([ring(cx + 0.038, cy + 0.031, 0.009, 0.008, 6, 0.9 * num)])
        props = {
            "area_numbe": str(num),
            "community": f"AREA {num:02d}",
        }
        if num % 11 != 0:  # a few areas lack the demographic column
            props["pct_latinx"] = round(5 + (num * 37) % 90 + (num % 3) * 0.5, 1)
        features.append(
            {
                "type": "Feature",
                "properties": props,
                "geometry": {"type": "MultiPolygon", "coordinates": parts},
            }
        )
    doc = {"type": "FeatureCollection", "features": features}
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(doc) + "\n", encoding="utf-8")
    n_parts = sum(len(f["geometry"]["coordinates"]) for f in features)
    print(f"wrote {OUT} ({len(features)} features, {n_parts} polygon parts)")


if __name__ == "__main__":
    sys.exit(main())
