"""Recursive drifter position forecasting and the prediction-error seam.

Latitude and longitude are treated as two independent series. Multi-step
predictions are produced one step at a time with an expanding window: each
prediction is appended to the model's input before the next step, and ground
truth after the accident is never consulted.

The heavy forecasting model used offline (or any other external model) plugs
in through the ``external-file`` predictor: a CSV of per-step predictions
with header ``step,lat,lon``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geo import EARTH, EarthModel, GeoPoint, haversine_km
from .ingest import AccidentSpec, DrifterTrack

PREDICTOR_KINDS = ("persistence", "linear-extrapolation", "external-file")


class InsufficientHistory(ValueError):
    """Not enough observations before the accident for the chosen predictor."""


@dataclass(frozen=True)
class Forecast:
    """Predicted position at the planning horizon plus its uncertainty proxy."""

    predicted: GeoPoint
    prev_step_error_km: float
    history_used: int

    def __post_init__(self) -> None:
        if self.prev_step_error_km < 0:
            raise ValueError("prev_step_error_km must be non-negative")


@dataclass(frozen=True)
class PredictorSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in PREDICTOR_KINDS:
            raise ValueError(f"unknown predictor kind {self.kind!r}, expected one of {PREDICTOR_KINDS}")
        if self.kind == "external-file" and "path" not in self.params:
            raise ValueError("external-file predictor needs a 'path' param")


def load_external_forecast(path) -> list[GeoPoint]:
    """Read an external per-step forecast CSV (``step,lat,lon``, steps 1..H)."""
    rows: dict[int, GeoPoint] = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            rows[int(row["step"])] = GeoPoint(float(row["lat"]), float(row["lon"]))
    if not rows:
        raise ValueError(f"empty forecast file {path}")
    steps = sorted(rows)
    if steps != list(range(1, len(steps) + 1)):
        raise ValueError(f"forecast file steps must be 1..H, got {steps}")
    return [rows[s] for s in steps]


def _linear_next(series: Sequence[float]) -> float:
    """Least-squares linear fit over the whole series, extrapolated one step."""
    n = len(series)
    x = np.arange(n, dtype=float)
    slope, intercept = np.polyfit(x, np.asarray(series, dtype=float), 1)
    return float(slope * n + intercept)


def predict_recursive(
    track: DrifterTrack,
    accident_index: int,
    steps: int,
    predictor: PredictorSpec,
    context_start: int = 0,
) -> list[GeoPoint]:
    """Predict `steps` future positions, feeding each prediction back as input.

    Only records up to and including `accident_index` are read; the expanding
    window then grows with the model's own outputs.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if accident_index >= len(track):
        raise InsufficientHistory(f"accident_index {accident_index} outside track of length {len(track)}")

    if predictor.kind == "external-file":
        points = load_external_forecast(predictor.params["path"])
        if len(points) < steps:
            raise InsufficientHistory(f"forecast file has {len(points)} steps, need {steps}")
        return points[:steps]

    history = [track.position(i) for i in range(context_start, accident_index + 1)]
    if predictor.kind == "persistence":
        if not history:
            raise InsufficientHistory("persistence needs at least one observation")
        return [history[-1]] * steps

    # linear-extrapolation
    if len(history) < 2:
        raise InsufficientHistory("linear-extrapolation needs at least two observations")
    lats = [p.lat for p in history]
    lons = [p.lon for p in history]
    out: list[GeoPoint] = []
    for _ in range(steps):
        p = GeoPoint(_linear_next(lats), _linear_next(lons))
        lats.append(p.lat)
        lons.append(p.lon)
        out.append(p)
    return out


def forecast_scenario(
    track: DrifterTrack,
    spec: AccidentSpec,
    predictor: PredictorSpec,
    context_start: int = 0,
    earth: EarthModel = EARTH,
) -> Forecast:
    """Predict the position at the planning horizon and measure last-step error.

    The error is the haversine distance between the recursive prediction and
    the ground truth one step before the horizon; it parameterizes both the
    search-area radius and the particle spread downstream.
    """
    spec.validate_against(track)
    horizon = spec.horizon_hours
    predictions = predict_recursive(track, spec.accident_index, horizon, predictor, context_start)
    predicted = predictions[horizon - 1]
    if horizon >= 2:
        truth_prev = track.position(spec.accident_index + horizon - 1)
        error_km = haversine_km(predictions[horizon - 2], truth_prev, earth)
    else:
        # One-step horizon: the "previous step" is the accident observation itself.
        error_km = 0.0
    history_used = spec.accident_index - context_start + 1
    return Forecast(predicted=predicted, prev_step_error_km=error_km, history_used=history_used)


def benchmark_predictors(
    tracks: Sequence[DrifterTrack],
    specs: Sequence[PredictorSpec],
    horizon: int = 6,
    accident_index: int | None = None,
    earth: EarthModel = EARTH,
) -> list[tuple[PredictorSpec, float]]:
    """Mean haversine prediction error (km) per predictor over all tracks.

    Each track is scored over every horizon step; `accident_index` defaults to
    leaving exactly `horizon` ground-truth steps at the end of the track.
    """
    if not tracks:
        raise ValueError("need at least one track")
    results: list[tuple[PredictorSpec, float]] = []
    for spec in specs:
        errors: list[float] = []
        for track in tracks:
            idx = accident_index if accident_index is not None else len(track) - 1 - horizon
            predictions = predict_recursive(track, idx, horizon, spec)
            for k, pred in enumerate(predictions, start=1):
                errors.append(haversine_km(pred, track.position(idx + k), earth))
        results.append((spec, float(np.mean(errors))))
    return results
