"""Run configuration: one JSON manifest naming every input file.

Relative paths resolve against the config file's directory, so a config
committed next to its data keeps working from any working directory.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .classify import METHOD_NATURAL_BREAKS, METHOD_QUANTILE
from .errors import ConfigError
from .geo import MILE_M
from .ingest import LAYER_KINDS, ZONE_SCALES


@dataclass(frozen=True)
class SchoolsConfig:
    path: str
    mapping: dict[str, str]
    delimiter: str = ","
    share_unit: str = "fraction"


@dataclass(frozen=True)
class LayerConfig:
    id: str
    title: str
    kind: str
    path: str
    id_property: str | None = None


@dataclass(frozen=True)
class ZoneSetConfig:
    scale: str
    path: str
    id_property: str | None = None
    name_property: str | None = None
    latinx_share_property: str | None = None
    share_unit: str = "fraction"


@dataclass(frozen=True)
class Defaults:
    radius_m: float = MILE_M
    k: int = 4
    method: str = METHOD_NATURAL_BREAKS
    exclude_zero_school_zones: bool = False


@dataclass(frozen=True)
class RunConfig:
    base_dir: Path
    schools: SchoolsConfig
    layers: tuple[LayerConfig, ...]
    zone_sets: tuple[ZoneSetConfig, ...]
    defaults: Defaults = field(default_factory=Defaults)
    output_dir: str | None = None

    def resolve(self, path: str) -> Path:
        return (self.base_dir / path).resolve()

    def layer_by_id(self, layer_id: str) -> LayerConfig:
        for layer in self.layers:
            if layer.id == layer_id:
                return layer
        raise ConfigError(f"no hazard layer with id {layer_id!r}")


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigError(f"{where}: missing required key {key!r}")
    return obj[key]


def _opt_str(obj: dict, key: str) -> str | None:
    value = obj.get(key)
    if value is None:
        return None
    return str(value)


def load_config(path: str | Path) -> RunConfig:
    """Load and validate a run-config JSON file."""
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")

    base_dir = path.parent

    s = _require(doc, "schools", "config")
    mapping = _require(s, "mapping", "config.schools")
    if not isinstance(mapping, dict):
        raise ConfigError("config.schools.mapping must be an object")
    share_unit = s.get("share_unit", "fraction")
    if share_unit not in ("fraction", "percent"):
        raise ConfigError(f"config.schools.share_unit: unknown unit {share_unit!r}")
    schools = SchoolsConfig(
        path=str(_require(s, "path", "config.schools")),
        mapping={str(k): str(v) for k, v in mapping.items()},
        delimiter=str(s.get("delimiter", ",")),
        share_unit=share_unit,
    )

    raw_layers = _require(doc, "layers", "config")
    if not isinstance(raw_layers, list) or not raw_layers:
        raise ConfigError("config.layers must be a nonempty array")
    layers = []
    for i, entry in enumerate(raw_layers):
        where = f"config.layers[{i}]"
        kind = str(_require(entry, "kind", where))
        if kind not in LAYER_KINDS:
            raise ConfigError(f"{where}: unknown kind {kind!r}")
        layers.append(
            LayerConfig(
                id=str(_require(entry, "id", where)),
                title=str(entry.get("title", entry["id"])),
                kind=kind,
                path=str(_require(entry, "path", where)),
                id_property=_opt_str(entry, "id_property"),
            )
        )
    ids = [l.id for l in layers]
    if len(set(ids)) != len(ids):
        raise ConfigError("config.layers: duplicate layer ids")

    raw_zone_sets = _require(doc, "zone_sets", "config")
    if not isinstance(raw_zone_sets, list) or not raw_zone_sets:
        raise ConfigError("config.zone_sets must be a nonempty array")
    zone_sets = []
    for i, entry in enumerate(raw_zone_sets):
        where = f"config.zone_sets[{i}]"
        scale = str(_require(entry, "scale", where))
        if scale not in ZONE_SCALES:
            raise ConfigError(f"{where}: unknown scale {scale!r}")
        zs_unit = entry.get("share_unit", "fraction")
        if zs_unit not in ("fraction", "percent"):
            raise ConfigError(f"{where}: unknown share unit {zs_unit!r}")
        zone_sets.append(
            ZoneSetConfig(
                scale=scale,
                path=str(_require(entry, "path", where)),
                id_property=_opt_str(entry, "id_property"),
                name_property=_opt_str(entry, "name_property"),
                latinx_share_property=_opt_str(entry, "latinx_share_property"),
                share_unit=zs_unit,
            )
        )
    scales = [z.scale for z in zone_sets]
    if len(set(scales)) != len(scales):
        raise ConfigError("config.zone_sets: duplicate scales")

    d = doc.get("defaults", {})
    if not isinstance(d, dict):
        raise ConfigError("config.defaults must be an object")
    method = str(d.get("method", METHOD_NATURAL_BREAKS))
    if method not in (METHOD_NATURAL_BREAKS, METHOD_QUANTILE):
        raise ConfigError(f"config.defaults.method: unknown method {method!r}")
    try:
        radius_m = float(d.get("radius_m", MILE_M))
        k = int(d.get("k", 4))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"config.defaults: {e}") from e
    if radius_m <= 0:
        raise ConfigError("config.defaults.radius_m must be positive")
    if k < 1:
        raise ConfigError("config.defaults.k must be at least 1")
    defaults = Defaults(
        radius_m=radius_m,
        k=k,
        method=method,
        exclude_zero_school_zones=bool(d.get("exclude_zero_school_zones", False)),
    )

    config = RunConfig(
        base_dir=base_dir,
        schools=schools,
        layers=tuple(layers),
        zone_sets=tuple(zone_sets),
        defaults=defaults,
        output_dir=_opt_str(doc, "output_dir"),
    )

    for rel in [schools.path] + [l.path for l in layers] + [z.path for z in zone_sets]:
        resolved = config.resolve(rel)
        if not resolved.is_file():
            raise ConfigError(f"configured input does not exist: {rel} ({resolved})")
    return config
