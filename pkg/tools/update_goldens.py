#!/usr/bin/env python3
"""Regenerate the committed snapshot artifacts under tests/golden/.

Runs the CLI against the bundled fixture with the default parameters and
copies the deterministic text artifacts (not the PNGs, whose bytes vary
with the plotting library version) into the golden directory. Run this
only when an intentional output-format change invalidates the snapshots,
and review the diff before committing.
"""
from __future__ import annotations

import shutil
import sys
import tempfile
from pathlib import Path

from proxburden.cli import main

ROOT = Path(__file__).resolve().parent.parent
FIXTURE = ROOT / "fixture"
GOLDEN = ROOT / "tests" / "golden"

TEXT_ARTIFACTS = {
    "compute": ["scores.csv", "burden.geojson", "run.json"],
    "maup": ["maup.json"],
    "demographics": ["demographics.json"],
    "validate": ["validation.json"],
}


def run(args: list[str]) -> None:
    code = main(args)
    if code != 0:
        raise SystemExit(f"cli exited {code} for: {' '.join(args)}")


def regenerate() -> None:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    config = str(FIXTURE / "config.json")
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp)
        run(["compute", "--config", config, "--layer", "industrial_roads",
             "--out-dir", str(out / "compute")])
        run(["report", "--config", config, "--kind", "maup",
             "--layer", "industrial_roads", "--out-dir", str(out / "maup")])
        run(["report", "--config", config, "--kind", "demographics",
             "--layer", "industrial_roads", "--out-dir", str(out / "demographics")])
        run(["validate", "--config", config, "--out-dir", str(out / "validate")])
        for sub, names in TEXT_ARTIFACTS.items():
            for name in names:
                shutil.copyfile(out / sub / name, GOLDEN / name)
                print(f"updated {GOLDEN / name}")


if __name__ == "__main__":
    sys.exit(regenerate())
