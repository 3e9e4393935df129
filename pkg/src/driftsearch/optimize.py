"""Search strategies over deployment space: random, SA, PSO, GA.

All four share the fitness function (detected line segments) and a common
evaluation budget, counted at the fitness call site, so runs with the same
budget are directly comparable. Random search deliberately skips the repair
step; SA, PSO, and GA repair every candidate they evaluate.

Internally the decision variable is an (n_uavs, 2) array of local-plane
kilometers anchored at the search-area center; conversion to lat/lon happens
only at the API boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geo import EARTH, EarthModel, GeoPoint, haversine_km_arrays, latlon_to_local, local_to_latlon
from .model import MAX_DETECTION_RADIUS_M, MIN_DETECTION_RADIUS_M, RADIUS_SLOPE_M_PER_KM, Deployment
from .repair import RepairConfig, repair_coords
from .scenario import Scenario, SearchArea

ALGORITHMS = ("random", "sa", "pso", "ga")


@dataclass(frozen=True)
class GaParams:
    pop_size: int = 50
    generations: int = 50
    crossover_rate: float = 1.0
    mutation_rate: float = 0.1
    blx_alpha: float = 0.5


@dataclass(frozen=True)
class PsoParams:
    pop_size: int = 50
    generations: int = 50
    inertia_w: float = 0.7
    c1: float = 2.0
    c2: float = 2.0


@dataclass(frozen=True)
class SaParams:
    t0: float = 1.0
    cooling: float = 0.95
    iterations: int = 10
    # Neighborhood scale as a fraction of the search radius at T = t0;
    # shrinks proportionally with temperature.
    step_fraction: float = 0.1


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm: str
    n_uavs: int
    budget_evals: int = 2500
    seed: int = 0
    ga: GaParams = field(default_factory=GaParams)
    pso: PsoParams = field(default_factory=PsoParams)
    sa: SaParams = field(default_factory=SaParams)
    repair: RepairConfig = field(default_factory=RepairConfig)
    fitness_unit_m: float = 100.0

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}, expected one of {ALGORITHMS}")
        if self.n_uavs < 1 or self.budget_evals < 1:
            raise ValueError("n_uavs and budget_evals must be >= 1")
        for rate in (self.ga.crossover_rate, self.ga.mutation_rate):
            if not 0.0 <= rate <= 1.0:
                raise ValueError("GA rates must be in [0, 1]")
        if self.fitness_unit_m <= 0:
            raise ValueError("fitness_unit_m must be positive")


@dataclass(frozen=True)
class FitnessValue:
    detected_segments: int
    total_segments: int

    def __post_init__(self) -> None:
        if not 0 <= self.detected_segments <= self.total_segments:
            raise ValueError("detected segment count out of range")

    @property
    def score(self) -> int:
        return self.detected_segments


@dataclass(frozen=True)
class OptimizationResult:
    best: Deployment
    best_fitness: FitnessValue
    history: tuple[float, ...]
    evals_used: int


class FitnessEvaluator:
    """Counts detected candidate-line segments for a deployment.

    Each candidate line is split into ceil(length / unit) equal segments; a
    segment counts as detected when its midpoint lies strictly inside at
    least one UAV disc. Midpoints are precomputed once per scenario, so a
    single evaluation is a vectorized distance matrix. The instance also
    serves as the budget counter.
    """

    def __init__(self, scenario: Scenario, unit_m: float = 100.0, earth: EarthModel = EARTH):
        if unit_m <= 0:
            raise ValueError("unit_m must be positive")
        self.scenario = scenario
        self.earth = earth
        self.center = scenario.area.center
        mids_e: list[np.ndarray] = []
        mids_n: list[np.ndarray] = []
        for line in scenario.lines:
            se, sn = latlon_to_local(line.start.lat, line.start.lon, self.center, earth)
            ee, en = latlon_to_local(line.end.lat, line.end.lon, self.center, earth)
            n_seg = max(1, math.ceil(line.length_km * 1000.0 / unit_m))
            fracs = (np.arange(n_seg) + 0.5) / n_seg
            mids_e.append(se + fracs * (ee - se))
            mids_n.append(sn + fracs * (en - sn))
        east = np.concatenate(mids_e)
        north = np.concatenate(mids_n)
        self.mid_lat, self.mid_lon = local_to_latlon(east, north, self.center, earth)
        self.total_segments = int(len(east))
        self.evals = 0

    def evaluate_coords(self, coords_km: np.ndarray) -> FitnessValue:
        self.evals += 1
        lat, lon = local_to_latlon(coords_km[:, 0], coords_km[:, 1], self.center, self.earth)
        d_center = haversine_km_arrays(lat, lon, self.center.lat, self.center.lon, self.earth)
        radii_m = np.clip(
            RADIUS_SLOPE_M_PER_KM * d_center + MAX_DETECTION_RADIUS_M,
            MIN_DETECTION_RADIUS_M,
            MAX_DETECTION_RADIUS_M,
        )
        dist_m = (
            haversine_km_arrays(
                lat[:, None], lon[:, None], self.mid_lat[None, :], self.mid_lon[None, :], self.earth
            )
            * 1000.0
        )
        detected = int((dist_m < radii_m[:, None]).any(axis=0).sum())
        return FitnessValue(detected, self.total_segments)

    def evaluate(self, deployment: Deployment) -> FitnessValue:
        coords = _deployment_coords(deployment, self.center, self.earth)
        return self.evaluate_coords(coords)


def fitness(deployment: Deployment, scenario: Scenario, unit_m: float = 100.0) -> FitnessValue:
    """One-off fitness of a deployment (builds a throwaway evaluator)."""
    return FitnessEvaluator(scenario, unit_m).evaluate(deployment)


def _deployment_coords(deployment: Deployment, center: GeoPoint, earth: EarthModel) -> np.ndarray:
    lat = np.array([u.position.lat for u in deployment.uavs])
    lon = np.array([u.position.lon for u in deployment.uavs])
    east, north = latlon_to_local(lat, lon, center, earth)
    return np.column_stack([east, north])


def _coords_to_deployment(
    coords_km: np.ndarray, area: SearchArea, earth: EarthModel = EARTH
) -> Deployment:
    lat, lon = local_to_latlon(coords_km[:, 0], coords_km[:, 1], area.center, earth)
    points = [GeoPoint(float(la), float(lo)) for la, lo in zip(lat, lon)]
    return Deployment.from_points(points, area, earth)


def _random_coords(n_uavs: int, radius_km: float, rng: np.random.Generator) -> np.ndarray:
    """Polar draw per UAV: angle uniform in [0, 2pi), distance uniform in [0, R]."""
    theta = rng.uniform(0.0, 2.0 * math.pi, n_uavs)
    h = rng.uniform(0.0, radius_km, n_uavs)
    return np.column_stack([h * np.cos(theta), h * np.sin(theta)])


def initialize(n_uavs: int, area: SearchArea, seed: int, earth: EarthModel = EARTH) -> Deployment:
    """Random deployment inside the search area, radii derived per position."""
    rng = np.random.default_rng(seed)
    coords = _random_coords(n_uavs, area.radius_km, rng)
    return _coords_to_deployment(coords, area, earth)


def run_random(scenario: Scenario, config: OptimizerConfig, earth: EarthModel = EARTH) -> OptimizationResult:
    """Pure random sampling, no repair; the unguided baseline."""
    rng = np.random.default_rng(config.seed)
    ev = FitnessEvaluator(scenario, config.fitness_unit_m, earth)
    area = scenario.area
    best_coords = None
    best_fv = None
    history: list[float] = []
    block = min(50, config.budget_evals)
    for i in range(config.budget_evals):
        coords = _random_coords(config.n_uavs, area.radius_km, rng)
        fv = ev.evaluate_coords(coords)
        if best_fv is None or fv.score > best_fv.score:
            best_fv, best_coords = fv, coords
        if (i + 1) % block == 0 or i + 1 == config.budget_evals:
            history.append(float(best_fv.score))
    return OptimizationResult(
        _coords_to_deployment(best_coords, area, earth), best_fv, tuple(history), ev.evals
    )


def _blx_children(
    a: np.ndarray, b: np.ndarray, alpha: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Blend crossover per gene: uniform in the parents' interval +- alpha*|diff|."""
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    spread = alpha * (hi - lo)
    low, high = lo - spread, hi + spread
    return rng.uniform(low, high), rng.uniform(low, high)


def run_ga(scenario: Scenario, config: OptimizerConfig, earth: EarthModel = EARTH) -> OptimizationResult:
    """Generational GA with BLX crossover, reset mutation, and elitist truncation."""
    p = config.ga
    if p.pop_size % 2 != 0:
        raise ValueError("GA population size must be even")
    rng = np.random.default_rng(config.seed)
    ev = FitnessEvaluator(scenario, config.fitness_unit_m, earth)
    area = scenario.area
    radius = area.radius_km
    center = area.center

    def repaired(coords: np.ndarray) -> np.ndarray:
        return repair_coords(coords, radius, center, config.repair, earth)

    pop = [repaired(_random_coords(config.n_uavs, radius, rng)) for _ in range(p.pop_size)]
    fits = [ev.evaluate_coords(c) for c in pop]
    best_idx = max(range(len(pop)), key=lambda i: fits[i].score)
    best_coords, best_fv = pop[best_idx], fits[best_idx]
    history = [float(best_fv.score)]

    while ev.evals < config.budget_evals:
        n_offspring = min(p.pop_size, config.budget_evals - ev.evals)
        order = rng.permutation(p.pop_size)
        offspring: list[np.ndarray] = []
        for pair_idx in range(p.pop_size // 2):
            ia, ib = order[2 * pair_idx], order[2 * pair_idx + 1]
            pa, pb = pop[ia], pop[ib]
            if rng.random() < p.crossover_rate:
                ca, cb = _blx_children(pa, pb, p.blx_alpha, rng)
            else:
                ca, cb = pa.copy(), pb.copy()
            for child in (ca, cb):
                reset = rng.random(config.n_uavs) < p.mutation_rate
                n_reset = int(reset.sum())
                if n_reset:
                    child[reset] = _random_coords(n_reset, radius, rng)
                offspring.append(repaired(child))
                if len(offspring) == n_offspring:
                    break
            if len(offspring) == n_offspring:
                break
        off_fits = [ev.evaluate_coords(c) for c in offspring]
        # (mu + lambda) elitist truncation; stable sort keeps first-found on ties.
        pool = pop + offspring
        pool_fits = fits + off_fits
        keep = sorted(range(len(pool)), key=lambda i: -pool_fits[i].score)[: p.pop_size]
        pop = [pool[i] for i in keep]
        fits = [pool_fits[i] for i in keep]
        if fits[0].score > best_fv.score:
            best_fv, best_coords = fits[0], pop[0]
        history.append(float(best_fv.score))
    return OptimizationResult(
        _coords_to_deployment(best_coords, area, earth), best_fv, tuple(history), ev.evals
    )


def run_pso(scenario: Scenario, config: OptimizerConfig, earth: EarthModel = EARTH) -> OptimizationResult:
    """Standard inertia-weight PSO; every position update is repaired."""
    p = config.pso
    rng = np.random.default_rng(config.seed)
    ev = FitnessEvaluator(scenario, config.fitness_unit_m, earth)
    area = scenario.area
    radius = area.radius_km
    center = area.center

    pos = [
        repair_coords(_random_coords(config.n_uavs, radius, rng), radius, center, config.repair, earth)
        for _ in range(p.pop_size)
    ]
    vel = [np.zeros((config.n_uavs, 2)) for _ in range(p.pop_size)]
    fits = [ev.evaluate_coords(c) for c in pos]
    pbest = [c.copy() for c in pos]
    pbest_f = list(fits)
    g_idx = max(range(p.pop_size), key=lambda i: fits[i].score)
    gbest, gbest_f = pos[g_idx].copy(), fits[g_idx]
    history = [float(gbest_f.score)]

    while ev.evals < config.budget_evals:
        n_updates = min(p.pop_size, config.budget_evals - ev.evals)
        for i in range(n_updates):
            r1 = rng.uniform(size=(config.n_uavs, 2))
            r2 = rng.uniform(size=(config.n_uavs, 2))
            vel[i] = (
                p.inertia_w * vel[i]
                + p.c1 * r1 * (pbest[i] - pos[i])
                + p.c2 * r2 * (gbest - pos[i])
            )
            pos[i] = repair_coords(pos[i] + vel[i], radius, center, config.repair, earth)
            fv = ev.evaluate_coords(pos[i])
            if fv.score > pbest_f[i].score:
                pbest[i], pbest_f[i] = pos[i].copy(), fv
                if fv.score > gbest_f.score:
                    gbest, gbest_f = pos[i].copy(), fv
        history.append(float(gbest_f.score))
    return OptimizationResult(
        _coords_to_deployment(gbest, area, earth), gbest_f, tuple(history), ev.evals
    )


def run_sa(scenario: Scenario, config: OptimizerConfig, earth: EarthModel = EARTH) -> OptimizationResult:
    """Single-chain simulated annealing with a temperature-scaled Gaussian step.

    The temperature drops by the cooling factor once per epoch, where an epoch
    is budget / iterations evaluations; this stretches the configured
    iteration count over the shared budget.
    """
    p = config.sa
    rng = np.random.default_rng(config.seed)
    ev = FitnessEvaluator(scenario, config.fitness_unit_m, earth)
    area = scenario.area
    radius = area.radius_km
    center = area.center

    current = repair_coords(_random_coords(config.n_uavs, radius, rng), radius, center, config.repair, earth)
    current_f = ev.evaluate_coords(current)
    best, best_f = current, current_f
    temperature = p.t0
    epoch = max(1, config.budget_evals // p.iterations)
    history = [float(best_f.score)]

    while ev.evals < config.budget_evals:
        # Move one randomly chosen UAV by a temperature-scaled Gaussian step.
        # Joint all-UAV moves almost never improve a tuned configuration and
        # degrade the chain below the random-search baseline.
        sigma = p.step_fraction * radius * temperature / p.t0
        candidate = current.copy()
        uav = int(rng.integers(config.n_uavs))
        candidate[uav] += rng.normal(0.0, sigma, size=2)
        candidate = repair_coords(candidate, radius, center, config.repair, earth)
        fv = ev.evaluate_coords(candidate)
        delta = fv.score - current_f.score
        if delta >= 0 or rng.random() < math.exp(delta / temperature):
            current, current_f = candidate, fv
            if fv.score > best_f.score:
                best, best_f = candidate, fv
        if ev.evals % epoch == 0:
            temperature *= p.cooling
            history.append(float(best_f.score))
    if not history or history[-1] != float(best_f.score):
        history.append(float(best_f.score))
    return OptimizationResult(
        _coords_to_deployment(best, area, earth), best_f, tuple(history), ev.evals
    )


_RUNNERS = {"random": run_random, "ga": run_ga, "pso": run_pso, "sa": run_sa}


def run(scenario: Scenario, config: OptimizerConfig, earth: EarthModel = EARTH) -> OptimizationResult:
    """Dispatch to the configured algorithm."""
    return _RUNNERS[config.algorithm](scenario, config, earth)
