"""Shared fixtures: the bundled dataset, its frozen expectations, and
a summary hook that prints one line per acceptance criterion."""
from __future__ import annotations

import json
from pathlib import Path

import pytest

from proxburden.config import load_config
from proxburden.engine import RunRequest, compute_run, load_dataset

ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = ROOT / "fixture"
DATA_DIR = Path(__file__).resolve().parent / "data"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

DEFAULT_TUPLE = dict(
    layer_id="industrial_roads",
    radius_m=1609.344,
    scale="community_area",
    method="natural_breaks",
    k=4,
)


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def run_config():
    return load_config(FIXTURE_DIR / "config.json")


@pytest.fixture(scope="session")
def dataset(run_config):
    return load_dataset(run_config)


@pytest.fixture(scope="session")
def expected() -> dict:
    with open(DATA_DIR / "expected_scores.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture()
def make_request():
    def _make(**overrides) -> RunRequest:
        params = dict(DEFAULT_TUPLE)
        params.update(overrides)
        return RunRequest(**params)

    return _make


@pytest.fixture(scope="session")
def default_run(dataset):
    return compute_run(dataset, RunRequest(**DEFAULT_TUPLE))


# --- acceptance summary -----------------------------------------------------
# Tests marked @pytest.mark.acceptance get a PASS/FAIL line in the
# terminal summary so the criteria can be read off a full run at a glance.

_acceptance_results: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance: release criterion reported in the run summary"
    )


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _acceptance_results[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_results.items():
        terminalreporter.write_line(f"{outcome}  {name}")
