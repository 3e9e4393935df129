"""UAV deployment model: positions, distance-dependent detection radii, PoD."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .geo import EARTH, EarthModel, GeoPoint, haversine_km
from .scenario import SearchArea

MAX_DETECTION_RADIUS_M = 600.0
MIN_DETECTION_RADIUS_M = 200.0
RADIUS_SLOPE_M_PER_KM = -200.0


def detection_radius_m(uav_pos: GeoPoint, center: GeoPoint, earth: EarthModel = EARTH) -> float:
    """Effective detection radius for a UAV placed at `uav_pos`.

    Linear in the haversine distance d (km) to the deployment center:
    600 m at the center, down to 200 m at d = 2 km, clamped to [200, 600]
    beyond that (the raw line would go negative for distant placements).
    """
    d = haversine_km(uav_pos, center, earth)
    raw = RADIUS_SLOPE_M_PER_KM * d + MAX_DETECTION_RADIUS_M
    return min(MAX_DETECTION_RADIUS_M, max(MIN_DETECTION_RADIUS_M, raw))


def detection_pod(radius_m: float) -> float:
    """Probability of detection for a disc of the given effective radius.

    1 - exp(-c) with coverage factor c = radius / 600.
    """
    return 1.0 - math.exp(-radius_m / MAX_DETECTION_RADIUS_M)


@dataclass(frozen=True)
class UavPosition:
    """A deployed UAV with its derived detection radius."""

    position: GeoPoint
    detection_radius_m: float

    @classmethod
    def place(cls, position: GeoPoint, center: GeoPoint, earth: EarthModel = EARTH) -> "UavPosition":
        """Place a UAV and derive its radius from the distance to `center`."""
        return cls(position, detection_radius_m(position, center, earth))

    @property
    def pod(self) -> float:
        return detection_pod(self.detection_radius_m)


def covers(uav: UavPosition, p: GeoPoint, earth: EarthModel = EARTH) -> bool:
    """True iff `p` lies strictly inside the UAV's detection disc."""
    return haversine_km(uav.position, p, earth) * 1000.0 < uav.detection_radius_m


@dataclass(frozen=True)
class Deployment:
    """An ordered set of UAV placements inside a search area."""

    uavs: tuple[UavPosition, ...]
    area: SearchArea

    def __post_init__(self) -> None:
        if len(self.uavs) < 1:
            raise ValueError("deployment needs at least one UAV")

    @classmethod
    def from_points(
        cls, points: Iterable[GeoPoint], area: SearchArea, earth: EarthModel = EARTH
    ) -> "Deployment":
        """Build a deployment, deriving every detection radius from `area.center`."""
        uavs = tuple(UavPosition.place(p, area.center, earth) for p in points)
        return cls(uavs, area)

    def __len__(self) -> int:
        return len(self.uavs)
