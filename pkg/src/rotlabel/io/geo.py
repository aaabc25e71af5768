"""Geographic point records and the spherical Mercator projection."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import InputError

EARTH_RADIUS_KM = 6371.0
MAX_LATITUDE = 85.06  # Mercator y diverges at the poles


@dataclass(frozen=True)
class GeoRecord:
    name: str
    lat: float
    lon: float
    weight: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.lat) and abs(self.lat) < MAX_LATITUDE):
            raise InputError(f"{self.name}: latitude {self.lat} outside (-{MAX_LATITUDE}, {MAX_LATITUDE})")
        if not (math.isfinite(self.lon) and abs(self.lon) <= 180.0):
            raise InputError(f"{self.name}: longitude {self.lon} outside [-180, 180]")


def mercator_project(recs: Iterable[GeoRecord], scale: float = 1.0) -> list[tuple[float, float]]:
    """Project to kilometres on a sphere of radius 6371, times ``scale``."""
    out = []
    for r in recs:
        lam = math.radians(r.lon)
        phi = math.radians(r.lat)
        out.append(
            (
                EARTH_RADIUS_KM * lam * scale,
                EARTH_RADIUS_KM * math.log(math.tan(math.pi / 4 + phi / 2)) * scale,
            )
        )
    return out


def read_geo_csv(path: str) -> list[GeoRecord]:
    """Read ``name,lat,lon[,weight]`` rows (header required, any column order)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        cols = {c.strip().lower(): c for c in (reader.fieldnames or [])}
        for need in ("name", "lat", "lon"):
            if need not in cols:
                raise InputError(f"{path}: missing column {need!r}")
        out = []
        for lineno, row in enumerate(reader, start=2):
            try:
                w = row.get(cols["weight"], "") if "weight" in cols else ""
                out.append(
                    GeoRecord(
                        row[cols["name"]],
                        float(row[cols["lat"]]),
                        float(row[cols["lon"]]),
                        float(w) if w else None,
                    )
                )
            except (TypeError, ValueError) as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from exc
    return out
