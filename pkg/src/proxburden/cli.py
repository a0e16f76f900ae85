"""Command-line interface: validate | compute | report | serve.

Exit codes: 0 success, 2 usage/config error, 3 data-validation failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import engine, figures
from .api import make_server
from .config import RunConfig, load_config
from .errors import (
    BreakCountError,
    ConfigError,
    ParseError,
    ScaleUnavailableError,
    UndefinedStatisticError,
)
from .ingest import SCALE_COMMUNITY_AREA

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proxburden",
        description="School proximity-burden engine: score schools against "
        "hazard layers and aggregate by zone.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {engine.ENGINE_VERSION}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="run-config JSON file")
        p.add_argument(
            "--out-dir",
            help="output directory (default: config output_dir, else ./out)",
        )

    p_validate = sub.add_parser("validate", help="check datasets and write a report")
    add_common(p_validate)

    def add_run_params(p):
        p.add_argument("--layer", required=True, help="hazard layer id")
        p.add_argument("--radius-m", type=float, help="search radius in meters")
        p.add_argument(
            "--scale",
            choices=["community_area", "census_tract"],
            help="zone scale (default community_area)",
        )
        p.add_argument(
            "--method",
            choices=["natural_breaks", "quantile"],
            help="classification method (default from config)",
        )
        p.add_argument("--k", type=int, help="class count (default from config)")
        p.add_argument(
            "--workers", type=int, default=1, help="worker threads (default 1)"
        )

    p_compute = sub.add_parser(
        "compute", help="score schools, roll up zones, write artifacts"
    )
    add_common(p_compute)
    add_run_params(p_compute)

    p_report = sub.add_parser("report", help="write an analysis report")
    add_common(p_report)
    p_report.add_argument("--kind", required=True, choices=["maup", "demographics"])
    add_run_params(p_report)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", required=True, help="run-config JSON file")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    p_serve.add_argument("--static-dir", help="directory of dashboard assets to serve")
    p_serve.add_argument("--verbose", action="store_true", help="log requests")
    return parser


def _out_dir(args, config: RunConfig) -> Path:
    if args.out_dir:
        out = Path(args.out_dir)
    elif config.output_dir:
        out = config.resolve(config.output_dir)
    else:
        out = Path("out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _request_from_args(args, config: RunConfig) -> engine.RunRequest:
    d = config.defaults
    return engine.RunRequest(
        layer_id=args.layer,
        radius_m=args.radius_m if args.radius_m is not None else d.radius_m,
        scale=args.scale or SCALE_COMMUNITY_AREA,
        method=args.method or d.method,
        k=args.k if args.k is not None else d.k,
    )


def _write(path: Path, data: bytes):
    path.write_bytes(data)
    print(f"wrote {path}")


def cmd_validate(args) -> int:
    config = load_config(args.config)
    dataset = engine.load_dataset(config)
    report = engine.validate_run(dataset)
    out = _out_dir(args, config)
    _write(out / "validation.json", engine.validation_json_bytes(report))
    if not report.ok:
        print(f"validation failed: {report.count('error')} error(s)", file=sys.stderr)
        return EXIT_DATA
    print(
        f"validation ok: {report.count('warn')} warning(s), "
        f"{report.count('info')} note(s)"
    )
    return EXIT_OK


def cmd_compute(args) -> int:
    config = load_config(args.config)
    dataset = engine.load_dataset(config)
    request = _request_from_args(args, config)
    result = engine.compute_run(
        dataset,
        request,
        exclude_zero_school_zones=config.defaults.exclude_zero_school_zones,
        workers=args.workers,
    )
    out = _out_dir(args, config)
    _write(out / "scores.csv", engine.scores_csv_bytes(result))
    _write(out / "burden.geojson", engine.burden_geojson_bytes(dataset, result))
    _write(out / "run.json", engine.run_json_bytes(dataset, result))
    figures.save_choropleth(dataset, result, out / "choropleth.png")
    print(f"wrote {out / 'choropleth.png'}")
    figures.save_class_counts(result, out / "class_counts.png")
    print(f"wrote {out / 'class_counts.png'}")
    return EXIT_OK


def cmd_report(args) -> int:
    config = load_config(args.config)
    dataset = engine.load_dataset(config)
    request = _request_from_args(args, config)
    out = _out_dir(args, config)
    if args.kind == "maup":
        report = engine.maup_run(
            dataset,
            request.layer_id,
            request.radius_m,
            request.method,
            request.k,
            exclude_zero_school_zones=config.defaults.exclude_zero_school_zones,
            workers=args.workers,
        )
        _write(
            out / "maup.json",
            engine.maup_json_bytes(report, request.layer_id, request.radius_m),
        )
        figures.save_maup_histograms(report, out / "maup_classes.png")
        print(f"wrote {out / 'maup_classes.png'}")
    else:
        result = engine.compute_run(
            dataset,
            request,
            exclude_zero_school_zones=config.defaults.exclude_zero_school_zones,
            workers=args.workers,
        )
        report = engine.demographics_run(dataset, result)
        _write(
            out / "demographics.json",
            engine.demographics_json_bytes(report, request.layer_id, request.radius_m),
        )
        figures.save_demographics_chart(report, out / "demographics.png")
        print(f"wrote {out / 'demographics.png'}")
    return EXIT_OK


def cmd_serve(args) -> int:
    config = load_config(args.config)
    static_dir = Path(args.static_dir) if args.static_dir else None
    if static_dir is not None and not static_dir.is_dir():
        raise ConfigError(f"static dir does not exist: {static_dir}")
    try:
        server = make_server(
            config,
            host=args.host,
            port=args.port,
            static_dir=static_dir,
            verbose=args.verbose,
        )
    except OSError as e:
        print(f"error: cannot bind {args.host}:{args.port}: {e}", file=sys.stderr)
        return EXIT_USAGE
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "compute": cmd_compute,
        "report": cmd_report,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, ScaleUnavailableError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, BreakCountError, UndefinedStatisticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
