"""Read-only HTTP service over a loaded dataset.

Endpoints (JSON, UTF-8):
    GET /api/layers
    GET /api/burden?layer=&radius_m=&scale=&method=&k=
    GET /api/schools?layer=&radius_m=&scale=
    GET /api/report/maup?layer=&radius_m=&method=&k=
    GET /api/report/demographics?layer=&radius_m=&scale=&method=&k=
Anything else is served from the static directory, if one is configured.

Bodies come from the same serializers the CLI writes to disk, so a given
request tuple always yields the same bytes as the corresponding file
artifact. Computed bodies are cached per normalized tuple; the cache is
the only mutable state and sits behind a lock.

Built directly on http.server: the handlers are a few GET routes, and
keeping the byte-level behavior (and error shapes) fully in hand matters
more here than framework conveniences.
"""
from __future__ import annotations

import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from . import engine
from .config import RunConfig
from .errors import (
    BreakCountError,
    ConfigError,
    ScaleUnavailableError,
    UndefinedStatisticError,
)
from .ingest import SCALE_COMMUNITY_AREA

JSON_TYPE = "application/json; charset=utf-8"


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error_body(code: str, message: str) -> bytes:
    return engine._json_bytes({"code": code, "message": message}, compact=True)


class BurdenService:
    """Request handling split from HTTP plumbing so tests can call it directly."""

    def __init__(
        self,
        dataset: engine.Dataset,
        config: RunConfig,
        static_dir: Path | None = None,
    ):
        self.dataset = dataset
        self.config = config
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        self._cache: dict[tuple, bytes] = {}
        self._lock = threading.Lock()

    # -- parameter handling --------------------------------------------------

    def _params(self, query: dict[str, list[str]]) -> dict[str, str]:
        return {k: v[0] for k, v in query.items() if v}

    def _float_param(self, params: dict, name: str, default: float) -> float:
        raw = params.get(name)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ApiError(400, "bad_parameter", f"{name} must be a number, got {raw!r}")

    def _int_param(self, params: dict, name: str, default: int) -> int:
        raw = params.get(name)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ApiError(400, "bad_parameter", f"{name} must be an integer, got {raw!r}")

    def _request_tuple(self, params: dict, default_scale: str = SCALE_COMMUNITY_AREA):
        layer = params.get("layer")
        if layer is None:
            raise ApiError(400, "missing_parameter", "layer parameter is required")
        defaults = self.config.defaults
        radius_m = self._float_param(params, "radius_m", defaults.radius_m)
        k = self._int_param(params, "k", defaults.k)
        scale = params.get("scale", default_scale)
        method = params.get("method", defaults.method)
        try:
            return engine.RunRequest(
                layer_id=layer, radius_m=radius_m, scale=scale, method=method, k=k
            )
        except ConfigError as e:
            raise ApiError(400, "bad_parameter", str(e))

    # -- computation with caching ---------------------------------------------

    def _cached(self, key: tuple, build) -> bytes:
        with self._lock:
            body = self._cache.get(key)
        if body is not None:
            return body
        body = build()
        with self._lock:
            self._cache.setdefault(key, body)
            return self._cache[key]

    def _run(self, request: engine.RunRequest) -> engine.RunResult:
        try:
            return engine.compute_run(
                self.dataset,
                request,
                exclude_zero_school_zones=self.config.defaults.exclude_zero_school_zones,
            )
        except ConfigError as e:
            raise ApiError(400, "bad_parameter", str(e))
        except BreakCountError as e:
            raise ApiError(
                422,
                "break_count",
                f"{e}; at most {e.distinct} classes are possible here",
            )
        except ScaleUnavailableError as e:
            raise ApiError(409, "scale_unavailable", str(e))

    # -- endpoint bodies -------------------------------------------------------

    def layers_body(self) -> bytes:
        return self._cached(("layers",), lambda: engine.layers_json_bytes(self.dataset))

    def burden_body(self, params: dict) -> bytes:
        request = self._request_tuple(params)
        key = ("burden",) + tuple(sorted(request.parameters().items()))
        return self._cached(
            key, lambda: engine.burden_geojson_bytes(self.dataset, self._run(request))
        )

    def schools_body(self, params: dict) -> bytes:
        request = self._request_tuple(params)
        key = ("schools",) + tuple(sorted(request.parameters().items()))
        return self._cached(
            key, lambda: engine.schools_json_bytes(self.dataset, self._run(request))
        )

    def maup_body(self, params: dict) -> bytes:
        request = self._request_tuple(params)
        key = (
            "maup",
            request.layer_id,
            request.radius_m,
            request.method,
            request.k,
        )

        def build():
            try:
                report = engine.maup_run(
                    self.dataset,
                    request.layer_id,
                    request.radius_m,
                    request.method,
                    request.k,
                    exclude_zero_school_zones=self.config.defaults.exclude_zero_school_zones,
                )
            except ScaleUnavailableError as e:
                raise ApiError(409, "scale_unavailable", str(e))
            except ConfigError as e:
                raise ApiError(400, "bad_parameter", str(e))
            except BreakCountError as e:
                raise ApiError(
                    422, "break_count", f"{e}; at most {e.distinct} classes are possible here"
                )
            except UndefinedStatisticError as e:
                raise ApiError(422, "undefined_statistic", str(e))
            return engine.maup_json_bytes(report, request.layer_id, request.radius_m)

        return self._cached(key, build)

    def demographics_body(self, params: dict) -> bytes:
        request = self._request_tuple(params)
        key = ("demographics",) + tuple(sorted(request.parameters().items()))

        def build():
            result = self._run(request)
            report = engine.demographics_run(self.dataset, result)
            return engine.demographics_json_bytes(
                report, request.layer_id, request.radius_m
            )

        return self._cached(key, build)

    # -- dispatch ---------------------------------------------------------------

    def handle(self, path: str, query: dict[str, list[str]]):
        """Returns (status, content_type, body)."""
        params = self._params(query)
        try:
            if path == "/api/layers":
                return 200, JSON_TYPE, self.layers_body()
            if path == "/api/burden":
                return 200, JSON_TYPE, self.burden_body(params)
            if path == "/api/schools":
                return 200, JSON_TYPE, self.schools_body(params)
            if path == "/api/report/maup":
                return 200, JSON_TYPE, self.maup_body(params)
            if path == "/api/report/demographics":
                return 200, JSON_TYPE, self.demographics_body(params)
            if path.startswith("/api/"):
                raise ApiError(404, "not_found", f"no such endpoint: {path}")
            return self._static(path)
        except ApiError as e:
            return e.status, JSON_TYPE, _error_body(e.code, e.message)

    def _static(self, path: str):
        if self.static_dir is None:
            raise ApiError(404, "not_found", f"no such endpoint: {path}")
        rel = path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not target.is_relative_to(self.static_dir) or not target.is_file():
            raise ApiError(404, "not_found", f"no such file: {path}")
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        if ctype.startswith("text/") or ctype.endswith("javascript"):
            ctype += "; charset=utf-8"
        return 200, ctype, target.read_bytes()


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "proxburden"

    def do_GET(self):
        split = urlsplit(self.path)
        service: BurdenService = self.server.service  # type: ignore[attr-defined]
        status, ctype, body = service.handle(split.path, parse_qs(split.query))
        self.send_response(status)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        if getattr(self.server, "verbose", False):
            super().log_message(format, *args)


class BurdenServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, address, service: BurdenService, verbose: bool = False):
        self.service = service
        self.verbose = verbose
        super().__init__(address, _Handler)


def make_server(
    config: RunConfig,
    host: str = "127.0.0.1",
    port: int = 8080,
    static_dir: Path | None = None,
    dataset: engine.Dataset | None = None,
    verbose: bool = False,
) -> BurdenServer:
    if dataset is None:
        dataset = engine.load_dataset(config)
    service = BurdenService(dataset, config, static_dir=static_dir)
    return BurdenServer((host, port), service, verbose=verbose)
