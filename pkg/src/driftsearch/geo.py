"""Great-circle distances and local tangent-plane geometry.

Everything downstream (particle sampling, repulsive-force repair, fitness
discretization) mixes great-circle distances with planar vector arithmetic.
The convention here: distances are haversine, vectors live in an
equirectangular tangent plane anchored at a reference point. At the scales
this toolkit targets (well under 50 km) the projection error is negligible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MEAN_EARTH_RADIUS_KM = 6371.0


@dataclass(frozen=True)
class EarthModel:
    """Spherical earth with a fixed mean radius in kilometers."""

    radius_km: float = MEAN_EARTH_RADIUS_KM

    def __post_init__(self) -> None:
        if not (self.radius_km > 0):
            raise ValueError(f"earth radius must be positive, got {self.radius_km}")

    @property
    def meters_per_degree(self) -> float:
        """Arc length of one degree of latitude, in meters."""
        return self.radius_km * 1000.0 * math.pi / 180.0


EARTH = EarthModel()


@dataclass(frozen=True)
class GeoPoint:
    """A latitude/longitude pair in degrees.

    Longitude is wrapped into [-180, 180] on construction; latitude outside
    [-90, 90] is rejected.
    """

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.lat) or not math.isfinite(self.lon):
            raise ValueError(f"non-finite coordinates ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            object.__setattr__(self, "lon", ((self.lon + 180.0) % 360.0) - 180.0)


@dataclass(frozen=True)
class LocalVector:
    """Displacement in the local tangent plane, meters east/north of an anchor."""

    east_m: float
    north_m: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.east_m) and math.isfinite(self.north_m)):
            raise ValueError(f"non-finite local vector ({self.east_m}, {self.north_m})")


def haversine_km(a: GeoPoint, b: GeoPoint, earth: EarthModel = EARTH) -> float:
    """Great-circle distance between two points in kilometers."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    s = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * earth.radius_km * math.asin(min(1.0, math.sqrt(s)))


def haversine_km_arrays(lat1, lon1, lat2, lon2, earth: EarthModel = EARTH) -> np.ndarray:
    """Vectorized haversine over degree arrays; broadcasts like numpy."""
    phi1 = np.radians(lat1)
    phi2 = np.radians(lat2)
    dphi = np.radians(np.subtract(lat2, lat1))
    dlam = np.radians(np.subtract(lon2, lon1))
    s = np.sin(dphi / 2.0) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(dlam / 2.0) ** 2
    return 2.0 * earth.radius_km * np.arcsin(np.minimum(1.0, np.sqrt(s)))


def _wrap_degrees(d: float) -> float:
    return ((d + 180.0) % 360.0) - 180.0


def to_local(p: GeoPoint, anchor: GeoPoint, earth: EarthModel = EARTH) -> LocalVector:
    """Project a point into the tangent plane anchored at `anchor`."""
    mpd = earth.meters_per_degree
    east = _wrap_degrees(p.lon - anchor.lon) * math.cos(math.radians(anchor.lat)) * mpd
    north = (p.lat - anchor.lat) * mpd
    return LocalVector(east, north)


def from_local(v: LocalVector, anchor: GeoPoint, earth: EarthModel = EARTH) -> GeoPoint:
    """Inverse of :func:`to_local`."""
    mpd = earth.meters_per_degree
    lat = anchor.lat + v.north_m / mpd
    lon = anchor.lon + v.east_m / (mpd * math.cos(math.radians(anchor.lat)))
    return GeoPoint(lat, lon)


def local_to_latlon(east_km, north_km, anchor: GeoPoint, earth: EarthModel = EARTH):
    """Array version of :func:`from_local`; inputs in km, outputs degree arrays."""
    mpd_km = earth.meters_per_degree / 1000.0
    lat = anchor.lat + np.asarray(north_km) / mpd_km
    lon = anchor.lon + np.asarray(east_km) / (mpd_km * math.cos(math.radians(anchor.lat)))
    return lat, lon


def latlon_to_local(lat, lon, anchor: GeoPoint, earth: EarthModel = EARTH):
    """Array version of :func:`to_local`; outputs (east_km, north_km)."""
    mpd_km = earth.meters_per_degree / 1000.0
    dlon = ((np.asarray(lon) - anchor.lon + 180.0) % 360.0) - 180.0
    east = dlon * math.cos(math.radians(anchor.lat)) * mpd_km
    north = (np.asarray(lat) - anchor.lat) * mpd_km
    return east, north


def project_to_circle(
    p: GeoPoint, center: GeoPoint, radius_km: float, earth: EarthModel = EARTH
) -> GeoPoint:
    """Pull a point onto (or leave it within) a haversine circle.

    Points inside the circle are returned unchanged. Points outside are moved
    along the center-to-point direction so that they land exactly on the
    boundary. A point coinciding with the center has no direction and is
    returned as the center itself.
    """
    d = haversine_km(p, center, earth)
    if d <= radius_km:
        return p
    v = to_local(p, center, earth)
    east, north = v.east_m, v.north_m
    q = p
    # The local-plane scaling is a contraction on the haversine distance;
    # a couple of fixed-point steps land inside machine precision.
    for _ in range(8):
        scale = radius_km / d
        east *= scale
        north *= scale
        q = from_local(LocalVector(east, north), center, earth)
        d = haversine_km(q, center, earth)
        if d <= radius_km:
            return q
    east *= 1.0 - 1e-12
    north *= 1.0 - 1e-12
    return from_local(LocalVector(east, north), center, earth)
