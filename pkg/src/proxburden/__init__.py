"""School proximity-burden engine.

Scores schools by neighborhood-student share times nearby-hazard exposure,
rolls scores up into zone-level collective burden, classifies the surface
for choropleth display, and serves the results over HTTP.
"""
from .burden import (
    BurdenScore,
    ExposureResult,
    ZoneBurden,
    assign_zone,
    collective_burden,
    hazard_exposure,
    proximity_burden,
)
from .classify import (
    BreakSet,
    ClassifiedSurface,
    assign_class,
    jenks_breaks,
    quantile_breaks,
)
from .config import RunConfig, load_config
from .engine import (
    ENGINE_VERSION,
    Dataset,
    RunRequest,
    RunResult,
    compute_run,
    load_dataset,
)
from .errors import (
    BreakCountError,
    ConfigError,
    ParseError,
    ProxBurdenError,
    ScaleUnavailableError,
    UndefinedStatisticError,
)
from .geo import (
    EARTH_RADIUS_M,
    MILE_M,
    GeoPoint,
    Polygon,
    Polyline,
    clip_length_in_disc,
    haversine_distance,
    min_distance_to_polygon,
    min_distance_to_polyline,
    point_in_polygon,
)
from .grid import FeatureIndex, build_index, query_radius_candidates
from .ingest import (
    HazardLayer,
    School,
    Zone,
    ZoneSet,
    parse_geojson,
    parse_schools,
    validate_dataset,
)
from .stats import (
    ClassDemographics,
    MaupReport,
    class_demographics,
    containment_map,
    maup_compare,
    pearson,
    spearman,
)

__version__ = ENGINE_VERSION

__all__ = [
    "BreakCountError",
    "BreakSet",
    "BurdenScore",
    "ClassDemographics",
    "ClassifiedSurface",
    "ConfigError",
    "Dataset",
    "EARTH_RADIUS_M",
    "ENGINE_VERSION",
    "ExposureResult",
    "FeatureIndex",
    "GeoPoint",
    "HazardLayer",
    "MILE_M",
    "MaupReport",
    "ParseError",
    "Polygon",
    "Polyline",
    "ProxBurdenError",
    "RunConfig",
    "RunRequest",
    "RunResult",
    "ScaleUnavailableError",
    "School",
    "UndefinedStatisticError",
    "Zone",
    "ZoneBurden",
    "ZoneSet",
    "assign_class",
    "assign_zone",
    "class_demographics",
    "clip_length_in_disc",
    "collective_burden",
    "compute_run",
    "containment_map",
    "build_index",
    "hazard_exposure",
    "haversine_distance",
    "jenks_breaks",
    "load_config",
    "load_dataset",
    "maup_compare",
    "min_distance_to_polygon",
    "min_distance_to_polyline",
    "parse_geojson",
    "parse_schools",
    "pearson",
    "point_in_polygon",
    "proximity_burden",
    "quantile_breaks",
    "query_radius_candidates",
    "spearman",
    "validate_dataset",
]
