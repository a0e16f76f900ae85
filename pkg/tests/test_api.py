"""HTTP service tests: endpoint bodies, error mapping, caching, static files."""
from __future__ import annotations

import json
import threading
import urllib.error
import urllib.request
from pathlib import Path

import pytest

from proxburden.api import make_server
from proxburden.config import load_config
from proxburden.engine import (
    RunRequest,
    burden_geojson_bytes,
    compute_run,
    demographics_run,
    demographics_json_bytes,
    layers_json_bytes,
    maup_json_bytes,
    maup_run,
    schools_json_bytes,
)

FIXTURE = Path(__file__).resolve().parent.parent / "fixture"


@pytest.fixture(scope="module")
def static_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("static")
    (d / "index.html").write_text("<!doctype html><title>burden map</title>", encoding="utf-8")
    (d / "app.js").write_text("console.log('ok');", encoding="utf-8")
    return d


@pytest.fixture(scope="module")
def server(dataset, static_dir):
    config = load_config(FIXTURE / "config.json")
    srv = make_server(config, port=0, static_dir=static_dir, dataset=dataset)
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()
    thread.join(timeout=5)


@pytest.fixture(scope="module")
def base_url(server):
    host, port = server.server_address[:2]
    return f"http://{host}:{port}"


def fetch(url: str):
    try:
        with urllib.request.urlopen(url) as resp:
            return resp.status, resp.headers.get("Content-Type"), resp.read()
    except urllib.error.HTTPError as e:
        return e.code, e.headers.get("Content-Type"), e.read()


class TestEndpoints:
    def test_layers_inventory(self, base_url, dataset, run_config):
        status, ctype, body = fetch(f"{base_url}/api/layers")
        assert status == 200
        assert ctype.startswith("application/json")
        assert body == layers_json_bytes(dataset)
        doc = json.loads(body)
        assert [l["id"] for l in doc["layers"]] == ["industrial_roads", "tri_facilities"]
        assert [z["scale"] for z in doc["zone_sets"]] == ["census_tract", "community_area"]

    def test_burden_default_tuple_matches_engine_bytes(self, base_url, dataset):
        status, _, body = fetch(f"{base_url}/api/burden?layer=industrial_roads")
        assert status == 200
        request = RunRequest(
            layer_id="industrial_roads",
            radius_m=1609.344,
            scale="community_area",
            method="natural_breaks",
            k=4,
        )
        result = compute_run(dataset, request)
        assert body == burden_geojson_bytes(dataset, result)

    def test_burden_explicit_parameters(self, base_url, dataset):
        url = (
            f"{base_url}/api/burden?layer=tri_facilities&radius_m=2000"
            "&scale=census_tract&method=quantile&k=3"
        )
        status, _, body = fetch(url)
        assert status == 200
        doc = json.loads(body)
        assert doc["meta"]["parameters"]["layer"] == "tri_facilities"
        assert doc["meta"]["parameters"]["k"] == 3
        assert len(doc["features"]) == 20

    def test_schools_rows(self, base_url, dataset):
        status, _, body = fetch(f"{base_url}/api/schools?layer=industrial_roads")
        assert status == 200
        request = RunRequest(
            layer_id="industrial_roads",
            radius_m=1609.344,
            scale="community_area",
            method="natural_breaks",
            k=4,
        )
        result = compute_run(dataset, request)
        assert body == schools_json_bytes(dataset, result)
        doc = json.loads(body)
        rows = {r["school_id"]: r for r in doc["schools"]}
        assert len(rows) == 40
        assert rows["SC05"]["excluded"] is True and rows["SC05"]["reason"] == "no_students"
        assert rows["SC39"]["excluded"] is True and rows["SC39"]["reason"] == "no_zone"
        assert rows["SC11"]["excluded"] is False and "reason" not in rows["SC11"]

    def test_maup_report_matches_engine_bytes(self, base_url, dataset):
        status, _, body = fetch(f"{base_url}/api/report/maup?layer=industrial_roads")
        assert status == 200
        report = maup_run(dataset, "industrial_roads", 1609.344, "natural_breaks", 4)
        assert body == maup_json_bytes(report, "industrial_roads", 1609.344)

    def test_demographics_report_matches_engine_bytes(self, base_url, dataset):
        status, _, body = fetch(f"{base_url}/api/report/demographics?layer=industrial_roads")
        assert status == 200
        request = RunRequest(
            layer_id="industrial_roads",
            radius_m=1609.344,
            scale="community_area",
            method="natural_breaks",
            k=4,
        )
        result = compute_run(dataset, request)
        report = demographics_run(dataset, result)
        assert body == demographics_json_bytes(report, "industrial_roads", 1609.344)

    def test_identical_requests_hit_cache(self, server, base_url):
        url = f"{base_url}/api/burden?layer=industrial_roads&k=3"
        _, _, first = fetch(url)
        before = len(server.service._cache)
        _, _, second = fetch(url)
        assert first == second
        assert len(server.service._cache) == before

    def test_parameter_aliases_normalise_to_one_cache_entry(self, server, base_url):
        a = fetch(f"{base_url}/api/burden?layer=industrial_roads&k=4&method=natural_breaks")
        b = fetch(f"{base_url}/api/burden?method=natural_breaks&k=4&layer=industrial_roads")
        assert a[2] == b[2]


class TestErrors:
    def test_missing_layer_parameter(self, base_url):
        status, ctype, body = fetch(f"{base_url}/api/burden")
        assert status == 400
        doc = json.loads(body)
        assert doc["code"] == "missing_parameter"
        assert "layer" in doc["message"]

    def test_unknown_layer(self, base_url):
        status, _, body = fetch(f"{base_url}/api/burden?layer=benzene")
        assert status == 400
        assert json.loads(body)["code"] == "bad_parameter"

    def test_unparseable_numeric_parameter(self, base_url):
        status, _, body = fetch(f"{base_url}/api/burden?layer=industrial_roads&radius_m=wide")
        assert status == 400
        assert json.loads(body)["code"] == "bad_parameter"

    def test_nonpositive_radius(self, base_url):
        status, _, body = fetch(f"{base_url}/api/burden?layer=industrial_roads&radius_m=0")
        assert status == 400

    def test_unknown_method(self, base_url):
        status, _, _ = fetch(f"{base_url}/api/burden?layer=industrial_roads&method=equal")
        assert status == 400

    def test_oversized_k_maps_to_unprocessable(self, base_url):
        status, _, body = fetch(f"{base_url}/api/burden?layer=industrial_roads&k=25")
        assert status == 422
        doc = json.loads(body)
        assert doc["code"] == "break_count"
        assert "at most" in doc["message"]

    def test_unknown_api_path(self, base_url):
        status, _, body = fetch(f"{base_url}/api/wibble")
        assert status == 404
        assert json.loads(body)["code"] == "not_found"

    def test_missing_scale_yields_conflict(self, dataset, tmp_path):
        # a config without the tract layer: tract requests are impossible
        doc = json.loads((FIXTURE / "config.json").read_text(encoding="utf-8"))
        doc["zone_sets"] = [z for z in doc["zone_sets"] if z["scale"] == "community_area"]
        for entry in doc["zone_sets"]:
            entry["path"] = str(FIXTURE / entry["path"])
        doc["schools"]["path"] = str(FIXTURE / doc["schools"]["path"])
        for entry in doc["layers"]:
            entry["path"] = str(FIXTURE / entry["path"])
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(doc), encoding="utf-8")

        from proxburden.api import BurdenService
        from proxburden.engine import load_dataset

        config = load_config(cfg_path)
        service = BurdenService(load_dataset(config), config)
        status, _, body = service.handle("/api/burden", {"layer": ["industrial_roads"], "scale": ["census_tract"]})
        assert status == 409
        assert json.loads(body)["code"] == "scale_unavailable"
        status, _, body = service.handle("/api/report/maup", {"layer": ["industrial_roads"]})
        assert status == 409


class TestStatic:
    def test_index_served_at_root(self, base_url):
        status, ctype, body = fetch(f"{base_url}/")
        assert status == 200
        assert ctype.startswith("text/html")
        assert b"burden map" in body

    def test_named_asset(self, base_url):
        status, ctype, body = fetch(f"{base_url}/app.js")
        assert status == 200
        assert "javascript" in ctype
        assert b"console.log" in body

    def test_missing_asset_is_404(self, base_url):
        status, _, _ = fetch(f"{base_url}/missing.css")
        assert status == 404

    def test_path_traversal_blocked(self, base_url, static_dir):
        secret = static_dir.parent / "secret.txt"
        secret.write_text("top", encoding="utf-8")
        status, _, body = fetch(f"{base_url}/../secret.txt")
        assert status == 404 or b"top" not in body

    def test_no_static_dir_means_404(self, dataset, run_config):
        from proxburden.api import BurdenService

        service = BurdenService(dataset, run_config, static_dir=None)
        status, _, _ = service.handle("/", {})
        assert status == 404
