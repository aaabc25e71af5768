"""File formats, ingestion, synthetic instances and SVG snapshots."""
from .errors import InputError
from .geo import EARTH_RADIUS_KM, GeoRecord, mercator_project, read_geo_csv
from .instances import (
    INSTANCE_VERSION,
    InstanceFile,
    dumps_instance,
    load_instance,
    loads_instance,
    save_instance,
)
from .labelings import (
    LABELING_VERSION,
    dumps_labeling,
    load_labeling,
    loads_labeling,
    save_labeling,
)
from .static import PointFeature, generate_random, generate_unit_squares, prepare_static_labeling
from .svg import svg_snapshot

__all__ = [
    "EARTH_RADIUS_KM",
    "GeoRecord",
    "INSTANCE_VERSION",
    "InputError",
    "InstanceFile",
    "LABELING_VERSION",
    "PointFeature",
    "dumps_instance",
    "dumps_labeling",
    "generate_random",
    "generate_unit_squares",
    "load_instance",
    "load_labeling",
    "loads_instance",
    "loads_labeling",
    "mercator_project",
    "prepare_static_labeling",
    "read_geo_csv",
    "save_instance",
    "save_labeling",
    "svg_snapshot",
]
