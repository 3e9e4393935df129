"""Feasibility repair: boundary projection plus repulsive-force de-overlap.

Two concerns are enforced on any candidate deployment:

1. every UAV must lie inside the circular search area (hard constraint,
   restored by projecting violators onto the boundary), and
2. detection discs should not overlap (best effort: iterative pairwise
   repulsive forces, re-clamping to the boundary after every move).

Forces are plain vectors in the local tangent plane anchored at the search
center; distances and overlap tests use haversine. Boundary feasibility is
always guaranteed on return; overlap freedom only within the iteration cap.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .geo import EARTH, EarthModel, GeoPoint, haversine_km_arrays, latlon_to_local, local_to_latlon
from .model import (
    MAX_DETECTION_RADIUS_M,
    MIN_DETECTION_RADIUS_M,
    RADIUS_SLOPE_M_PER_KM,
    Deployment,
)

# Fixed seed for the tie-break jitter applied to exactly coincident UAVs;
# a constant keeps repair a pure function of its inputs.
_JITTER_SEED = 0x5EED
_JITTER_KM = 0.001


@dataclass(frozen=True)
class RepairConfig:
    max_iter: int = 100
    alpha_r: float = 0.9
    overlap_tolerance_m: float = 0.0

    def __post_init__(self) -> None:
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not (0.0 < self.alpha_r <= 1.0):
            raise ValueError("alpha_r must be in (0, 1]")
        if self.overlap_tolerance_m < 0:
            raise ValueError("overlap_tolerance_m must be non-negative")


def _radii_km(dist_center_km: np.ndarray) -> np.ndarray:
    raw = RADIUS_SLOPE_M_PER_KM * dist_center_km + MAX_DETECTION_RADIUS_M
    return np.clip(raw, MIN_DETECTION_RADIUS_M, MAX_DETECTION_RADIUS_M) / 1000.0


def _geometry(coords_km: np.ndarray, center: GeoPoint, earth: EarthModel):
    """Per-UAV lat/lon, distance to center, radii, and pairwise distances."""
    lat, lon = local_to_latlon(coords_km[:, 0], coords_km[:, 1], center, earth)
    d_center = haversine_km_arrays(lat, lon, center.lat, center.lon, earth)
    radii = _radii_km(d_center)
    pairwise = haversine_km_arrays(lat[:, None], lon[:, None], lat[None, :], lon[None, :], earth)
    return d_center, radii, pairwise


def pairwise_repulsion(
    coords_km: np.ndarray,
    radii_km: np.ndarray,
    pairwise_km: np.ndarray,
    overlap_tolerance_km: float = 0.0,
):
    """Accumulate the repulsive forces of every overlapping pair (i < j).

    Returns (forces, interaction_counts, any_overlap). Forces obey Newton-pair
    symmetry: before normalization they sum to the zero vector.
    """
    n = len(coords_km)
    forces = np.zeros((n, 2))
    counts = np.zeros(n, dtype=int)
    any_overlap = False
    for i in range(n):
        for j in range(i + 1, n):
            d = pairwise_km[i, j]
            d_min = radii_km[i] + radii_km[j]
            if d < d_min - overlap_tolerance_km:
                any_overlap = True
                if d > 0:
                    f = (d_min / d) * (coords_km[j] - coords_km[i])
                    forces[i] -= f
                    forces[j] += f
                    counts[i] += 1
                    counts[j] += 1
    return forces, counts, any_overlap


def _clamp_to_boundary(
    coords_km: np.ndarray, radius_km: float, center: GeoPoint, earth: EarthModel
) -> np.ndarray:
    """Project any out-of-area UAV onto the boundary circle (in place)."""
    for _ in range(4):
        lat, lon = local_to_latlon(coords_km[:, 0], coords_km[:, 1], center, earth)
        d = haversine_km_arrays(lat, lon, center.lat, center.lon, earth)
        outside = d > radius_km
        if not outside.any():
            break
        scale = np.ones_like(d)
        scale[outside] = radius_km / d[outside]
        coords_km *= scale[:, None]
    return coords_km


def _separate_coincident(coords_km: np.ndarray, pairwise_km: np.ndarray, rng: random.Random) -> bool:
    """Nudge the higher-index UAV of each exactly coincident pair by 1 m.

    Coincident pairs receive no repulsive force (the direction is undefined)
    and would otherwise deadlock.
    """
    moved = False
    n = len(coords_km)
    for i in range(n):
        for j in range(i + 1, n):
            if pairwise_km[i, j] == 0.0 and np.array_equal(coords_km[i], coords_km[j]):
                angle = rng.uniform(0.0, 2.0 * math.pi)
                coords_km[j] += _JITTER_KM * np.array([math.cos(angle), math.sin(angle)])
                moved = True
    return moved


def repair_coords(
    coords_km: np.ndarray,
    area_radius_km: float,
    center: GeoPoint,
    config: RepairConfig = RepairConfig(),
    earth: EarthModel = EARTH,
) -> np.ndarray:
    """Repair a deployment given as (n, 2) local-plane km coordinates.

    Returns a new array; the input is not modified.
    """
    coords = np.array(coords_km, dtype=float)
    tol_km = config.overlap_tolerance_m / 1000.0
    rng = random.Random(_JITTER_SEED)

    # Phase 1: boundary correction via linear interpolation toward the center.
    _clamp_to_boundary(coords, area_radius_km, center, earth)

    # Phases 2-3: repulsive forces, then boundary clamping, until no overlap.
    for _ in range(config.max_iter):
        _, radii, pairwise = _geometry(coords, center, earth)
        if _separate_coincident(coords, pairwise, rng):
            _, radii, pairwise = _geometry(coords, center, earth)
        forces, counts, any_overlap = pairwise_repulsion(coords, radii, pairwise, tol_km)
        if not any_overlap:
            break
        active = counts > 0
        coords[active] += config.alpha_r * forces[active] / counts[active, None]
        _clamp_to_boundary(coords, area_radius_km, center, earth)
    return coords


def _is_feasible(deployment: Deployment, config: RepairConfig, earth: EarthModel) -> bool:
    center = deployment.area.center
    lat = np.array([u.position.lat for u in deployment.uavs])
    lon = np.array([u.position.lon for u in deployment.uavs])
    d_center = haversine_km_arrays(lat, lon, center.lat, center.lon, earth)
    if (d_center > deployment.area.radius_km).any():
        return False
    radii = np.array([u.detection_radius_m for u in deployment.uavs]) / 1000.0
    pairwise = haversine_km_arrays(lat[:, None], lon[:, None], lat[None, :], lon[None, :], earth)
    tol_km = config.overlap_tolerance_m / 1000.0
    n = len(deployment)
    for i in range(n):
        for j in range(i + 1, n):
            if pairwise[i, j] < radii[i] + radii[j] - tol_km:
                return False
    return True


def repair(
    deployment: Deployment, config: RepairConfig = RepairConfig(), earth: EarthModel = EARTH
) -> Deployment:
    """Return a boundary-feasible version of `deployment`.

    An already-feasible deployment is returned unchanged (exact identity, no
    projection round-trip). Detection radii are recomputed from the final
    positions.
    """
    if _is_feasible(deployment, config, earth):
        return deployment
    center = deployment.area.center
    lat = np.array([u.position.lat for u in deployment.uavs])
    lon = np.array([u.position.lon for u in deployment.uavs])
    east, north = latlon_to_local(lat, lon, center, earth)
    coords = np.column_stack([east, north])
    repaired = repair_coords(coords, deployment.area.radius_km, center, config, earth)
    out_lat, out_lon = local_to_latlon(repaired[:, 0], repaired[:, 1], center, earth)
    points = [GeoPoint(float(la), float(lo)) for la, lo in zip(out_lat, out_lon)]
    return Deployment.from_points(points, deployment.area, earth)
