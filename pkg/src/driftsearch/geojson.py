"""GeoJSON rendering of scenarios, deployments, and evaluation results."""

from __future__ import annotations

import json
import math

from .evaluate import EvaluationReport, segment_trajectory
from .geo import EARTH, EarthModel, GeoPoint, LocalVector, from_local
from .ingest import DrifterTrack
from .model import Deployment
from .scenario import Scenario


def _coord(p: GeoPoint) -> list[float]:
    return [p.lon, p.lat]


def circle_ring(center: GeoPoint, radius_km: float, n: int = 64, earth: EarthModel = EARTH) -> list[list[float]]:
    """Closed polygon ring approximating a haversine circle."""
    ring = []
    for i in range(n):
        angle = 2.0 * math.pi * i / n
        v = LocalVector(radius_km * 1000.0 * math.cos(angle), radius_km * 1000.0 * math.sin(angle))
        ring.append(_coord(from_local(v, center, earth)))
    ring.append(ring[0])
    return ring


def _feature(geometry: dict, **properties) -> dict:
    return {"type": "Feature", "geometry": geometry, "properties": properties}


def scenario_features(scenario: Scenario, earth: EarthModel = EARTH) -> list[dict]:
    feats = [
        _feature({"type": "Point", "coordinates": _coord(scenario.accident)}, role="accident"),
        _feature({"type": "Point", "coordinates": _coord(scenario.area.center)}, role="center"),
        _feature(
            {"type": "Polygon", "coordinates": [circle_ring(scenario.area.center, scenario.area.radius_km, earth=earth)]},
            role="search-area",
            radius_km=scenario.area.radius_km,
        ),
    ]
    for p in scenario.particles:
        feats.append(_feature({"type": "Point", "coordinates": _coord(p.position)}, role="particle"))
    for line in scenario.lines:
        feats.append(
            _feature(
                {"type": "LineString", "coordinates": [_coord(line.start), _coord(line.end)]},
                role="candidate-line",
                length_km=line.length_km,
            )
        )
    return feats


def deployment_features(deployment: Deployment, earth: EarthModel = EARTH) -> list[dict]:
    feats = []
    for uav in deployment.uavs:
        feats.append(
            _feature(
                {"type": "Point", "coordinates": _coord(uav.position)},
                role="uav",
                detection_radius_m=uav.detection_radius_m,
                pod=uav.pod,
            )
        )
        feats.append(
            _feature(
                {
                    "type": "Polygon",
                    "coordinates": [circle_ring(uav.position, uav.detection_radius_m / 1000.0, earth=earth)],
                },
                role="uav-disc",
                detection_radius_m=uav.detection_radius_m,
                pod=uav.pod,
            )
        )
    return feats


def export_geojson(
    scenario: Scenario,
    deployment: Deployment | None,
    path,
    track: DrifterTrack | None = None,
    track_slice: tuple[int, int] | None = None,
    report: EvaluationReport | None = None,
    eval_unit_m: float = 1.0,
    earth: EarthModel = EARTH,
) -> dict:
    """Write a FeatureCollection for map inspection; returns the document.

    Includes the scenario geometry, the UAV discs (with per-disc PoD), the
    actual trajectory when a track slice is given, and the covered segment
    midpoints when an evaluation report is given alongside it.
    """
    feats = scenario_features(scenario, earth)
    if deployment is not None:
        feats.extend(deployment_features(deployment, earth))
    if track is not None and track_slice is not None:
        lo, hi = track_slice
        coords = [_coord(track.position(i)) for i in range(lo, hi + 1)]
        feats.append(_feature({"type": "LineString", "coordinates": coords}, role="trajectory"))
        if report is not None:
            midpoints = segment_trajectory(track, lo, hi, eval_unit_m, earth)
            covered = [
                _coord(m)
                for m, p in zip(midpoints, report.segment_pods)
                if p > 0
            ]
            if covered and len(midpoints) == report.n_segments:
                feats.append(
                    _feature({"type": "MultiPoint", "coordinates": covered}, role="covered-segments")
                )
    doc = {"type": "FeatureCollection", "features": feats}
    with open(path, "w") as fh:
        json.dump(doc, fh)
    return doc
