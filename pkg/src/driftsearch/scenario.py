"""Build the search problem: area, Gaussian particles, candidate lines."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .forecast import Forecast
from .geo import EARTH, EarthModel, GeoPoint, haversine_km, local_to_latlon
from .ingest import AccidentSpec, DrifterTrack

DEFAULT_RADIUS_MULTIPLIER = 4.0
DEFAULT_SIGMA_MULTIPLIER = 4.0
# Guards against a degenerate zero-radius area when the previous-step
# prediction happened to be exact.
DEFAULT_RADIUS_FLOOR_KM = 0.5


@dataclass(frozen=True)
class SearchArea:
    """Circular feasible region for UAV placement, centered on the prediction."""

    center: GeoPoint
    radius_km: float

    def __post_init__(self) -> None:
        if not (self.radius_km > 0):
            raise ValueError(f"search radius must be positive, got {self.radius_km}")


@dataclass(frozen=True)
class Particle:
    """One hypothesized drifter endpoint."""

    position: GeoPoint


@dataclass(frozen=True)
class CandidateLine:
    """Straight candidate trajectory from the accident point to a particle."""

    start: GeoPoint
    end: GeoPoint
    length_km: float


@dataclass(frozen=True)
class Scenario:
    accident: GeoPoint
    area: SearchArea
    particles: tuple[Particle, ...]
    lines: tuple[CandidateLine, ...]
    sigma_km: float

    def __post_init__(self) -> None:
        if len(self.particles) != len(self.lines):
            raise ValueError("one candidate line per particle required")
        if self.sigma_km < 0:
            raise ValueError("sigma_km must be non-negative")

    def to_json(self) -> str:
        doc = {
            "accident": {"lat": self.accident.lat, "lon": self.accident.lon},
            "center": {"lat": self.area.center.lat, "lon": self.area.center.lon},
            "radius_km": self.area.radius_km,
            "sigma_km": self.sigma_km,
            "particles": [{"lat": p.position.lat, "lon": p.position.lon} for p in self.particles],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str, earth: EarthModel = EARTH) -> "Scenario":
        doc = json.loads(text)
        accident = GeoPoint(**doc["accident"])
        area = SearchArea(GeoPoint(**doc["center"]), doc["radius_km"])
        particles = tuple(Particle(GeoPoint(**p)) for p in doc["particles"])
        lines = tuple(_line(accident, p.position, earth) for p in particles)
        return cls(accident, area, particles, lines, doc["sigma_km"])


def _line(start: GeoPoint, end: GeoPoint, earth: EarthModel) -> CandidateLine:
    return CandidateLine(start, end, haversine_km(start, end, earth))


def build_search_area(
    forecast: Forecast,
    radius_multiplier: float = DEFAULT_RADIUS_MULTIPLIER,
    radius_floor_km: float = DEFAULT_RADIUS_FLOOR_KM,
) -> SearchArea:
    """Circle centered on the prediction, radius scaled from last-step error."""
    radius = max(radius_multiplier * forecast.prev_step_error_km, radius_floor_km)
    return SearchArea(center=forecast.predicted, radius_km=radius)


def sample_particles(
    forecast: Forecast,
    k: int,
    sigma_multiplier: float = DEFAULT_SIGMA_MULTIPLIER,
    seed: int = 0,
    earth: EarthModel = EARTH,
) -> list[Particle]:
    """Draw k particles from an isotropic Gaussian around the prediction.

    Sigma is stated in kilometers (sigma_multiplier times the previous-step
    error), so sampling happens in the local tangent plane and the draws are
    converted back to lat/lon.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    sigma_km = sigma_multiplier * forecast.prev_step_error_km
    rng = np.random.default_rng(seed)
    offsets = rng.normal(0.0, sigma_km if sigma_km > 0 else 0.0, size=(k, 2)) if sigma_km > 0 else np.zeros((k, 2))
    lats, lons = local_to_latlon(offsets[:, 0], offsets[:, 1], forecast.predicted, earth)
    return [Particle(GeoPoint(float(lat), float(lon))) for lat, lon in zip(lats, lons)]


def build_scenario(
    track: DrifterTrack,
    spec: AccidentSpec,
    forecast: Forecast,
    k: int,
    seed: int,
    radius_multiplier: float = DEFAULT_RADIUS_MULTIPLIER,
    sigma_multiplier: float = DEFAULT_SIGMA_MULTIPLIER,
    radius_floor_km: float = DEFAULT_RADIUS_FLOOR_KM,
    earth: EarthModel = EARTH,
) -> Scenario:
    """Assemble area, particles, and candidate lines into one scenario."""
    spec.validate_against(track)
    accident = track.position(spec.accident_index)
    area = build_search_area(forecast, radius_multiplier, radius_floor_km)
    particles = tuple(sample_particles(forecast, k, sigma_multiplier, seed, earth))
    lines = tuple(_line(accident, p.position, earth) for p in particles)
    sigma_km = sigma_multiplier * forecast.prev_step_error_km
    return Scenario(accident=accident, area=area, particles=particles, lines=lines, sigma_km=sigma_km)
