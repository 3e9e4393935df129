"""Command-line entry points: predict, plan, experiment, validate."""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .evaluate import EvaluationConfig, coverage, monte_carlo_coverage
from .forecast import PredictorSpec, benchmark_predictors, forecast_scenario
from .geo import EARTH, GeoPoint, haversine_km
from .geojson import export_geojson
from .ingest import AccidentSpec, load_tracks, synthesize_track
from .model import detection_pod, detection_radius_m
from .optimize import OptimizerConfig, initialize, run
from .repair import RepairConfig, repair
from .experiment import (
    ExperimentSpec,
    InstanceSpec,
    default_spec,
    run_experiment,
    synthetic_instances,
)
from .scenario import build_scenario


def _predictor_from_args(args) -> PredictorSpec:
    if args.predictor == "external":
        if not args.forecast_file:
            raise SystemExit("--forecast-file is required with --predictor external")
        return PredictorSpec("external-file", {"path": args.forecast_file})
    kind = {"persistence": "persistence", "linear": "linear-extrapolation"}[args.predictor]
    return PredictorSpec(kind)


def _load_instances(args) -> tuple[InstanceSpec, ...]:
    if args.tracks:
        tracks = load_tracks(args.tracks)
        predictor = _predictor_from_args(args)
        return tuple(
            InstanceSpec(
                name=t.id,
                track=t,
                accident=AccidentSpec(t.id, args.accident_index, args.horizon),
                predictor=predictor,
            )
            for t in tracks
        )
    return synthetic_instances()


def cmd_predict(args) -> int:
    if args.tracks:
        tracks = load_tracks(args.tracks)
    else:
        tracks = [inst.track for inst in synthetic_instances()]
    specs = [PredictorSpec("persistence"), PredictorSpec("linear-extrapolation")]
    if args.forecast_file:
        specs.append(PredictorSpec("external-file", {"path": args.forecast_file}))
    results = benchmark_predictors(tracks, specs, horizon=args.horizon)
    print(f"{'predictor':<24} mean haversine error (km)")
    for spec, err in results:
        print(f"{spec.kind:<24} {err:.4f}")
    return 0


def cmd_plan(args) -> int:
    instances = _load_instances(args)
    instance = instances[0]
    fc = forecast_scenario(instance.track, instance.accident, instance.predictor)
    scen = build_scenario(instance.track, instance.accident, fc, k=args.particles, seed=args.seed)
    config = OptimizerConfig(algorithm=args.algo, n_uavs=args.uavs, seed=args.seed)
    result = run(scen, config)
    lo = instance.accident.accident_index
    hi = lo + instance.accident.horizon_hours
    report = coverage(result.best, instance.track, lo, hi)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export_geojson(
        scen, result.best, out / "plan.geojson", track=instance.track,
        track_slice=(lo, hi), report=report,
    )
    (out / "report.json").write_text(report.to_json())
    print(f"instance {instance.name}: fitness={result.best_fitness.score}/"
          f"{result.best_fitness.total_segments}, coverage={report.coverage:.2f}")
    print(f"wrote {out / 'plan.geojson'} and {out / 'report.json'}")
    return 0


def _spec_from_config(path: str) -> ExperimentSpec:
    doc = json.loads(Path(path).read_text())
    base = default_spec()
    fields = {}
    for key in (
        "algorithms", "seeds", "uav_counts", "particle_counts", "budget_evals",
        "fitness_unit_m", "eval_unit_m", "k0", "radius_multiplier",
        "sigma_multiplier", "radius_floor_km",
    ):
        if key in doc:
            value = doc[key]
            fields[key] = tuple(value) if isinstance(value, list) else value
    if "repair" in doc:
        fields["repair"] = RepairConfig(**doc["repair"])
    return replace(base, **fields)


def cmd_experiment(args) -> int:
    if args.config:
        spec = _spec_from_config(args.config)
    else:
        spec = default_spec()
    overrides = {}
    if args.algo:
        overrides["algorithms"] = tuple(args.algo)
    if args.uavs:
        overrides["uav_counts"] = tuple(args.uavs)
    if args.particles:
        overrides["particle_counts"] = tuple(args.particles)
    if args.seed is not None:
        overrides["seeds"] = (args.seed,)
    if args.tracks:
        overrides["instances"] = _load_instances(args)
    if overrides:
        spec = replace(spec, **overrides)
    rows, summary = run_experiment(spec, out_dir=Path(args.out), write_maps=args.maps, progress=True)
    print(f"\n{len(rows)} runs; results in {args.out}/results.csv, summary in {args.out}/summary.csv")
    for cell in summary:
        print(
            f"{cell['instance']} uavs={cell['n_uavs']} particles={cell['n_particles']} "
            f"{cell['algorithm']:<7} avg={cell['avg']:.2f} best={cell['best']:.2f}"
        )
    return 0


def cmd_validate(args) -> int:
    """Quick self-checks of the core numerical laws."""
    checks: list[tuple[str, bool]] = []

    equator_deg = haversine_km(GeoPoint(0, 0), GeoPoint(0, 1))
    checks.append(("haversine equator degree ~ 111.19 km", abs(equator_deg - 111.19) < 0.02))
    quarter = haversine_km(GeoPoint(0, 0), GeoPoint(90, 0))
    checks.append(("haversine quarter meridian ~ 10007.5 km", abs(quarter - 10007.5) < 0.5))

    center = GeoPoint(34.0, 127.0)
    probe = GeoPoint(34.0, 127.0 + 1.0 / (111.19 * math.cos(math.radians(34.0))))
    checks.append(("radius law at d=0 is 600 m", detection_radius_m(center, center) == 600.0))
    checks.append(("radius law at d=1 km is ~400 m", abs(detection_radius_m(probe, center) - 400.0) < 1.0))
    checks.append(("PoD at 600 m ~ 0.6321", abs(detection_pod(600.0) - 0.6321) < 1e-4))
    checks.append(("PoD at 200 m ~ 0.2835", abs(detection_pod(200.0) - 0.2835) < 1e-4))

    instance = synthetic_instances(1)[0]
    fc = forecast_scenario(instance.track, instance.accident, instance.predictor)
    scen = build_scenario(instance.track, instance.accident, fc, k=10, seed=7)
    ok = True
    for seed in range(20):
        dep = initialize(6, scen.area, seed)
        fixed = repair(dep)
        for uav in fixed.uavs:
            if haversine_km(uav.position, scen.area.center) > scen.area.radius_km + 1e-6:
                ok = False
    checks.append(("repair keeps 20 random deployments in-bounds", ok))

    dep = repair(initialize(6, scen.area, 99))
    lo = instance.accident.accident_index
    hi = lo + instance.accident.horizon_hours
    cfg = EvaluationConfig(unit_m=5.0)
    analytic = coverage(dep, instance.track, lo, hi, cfg).coverage
    simulated = monte_carlo_coverage(dep, instance.track, lo, hi, cfg, trials=5000, seed=1)
    tol = max(1.0, 0.05 * max(analytic, 1.0))
    checks.append(("analytic coverage matches Monte-Carlo", abs(analytic - simulated) < tol))

    failed = 0
    for name, passed in checks:
        print(f"[{'PASS' if passed else 'FAIL'}] {name}")
        failed += 0 if passed else 1
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="driftsearch", description="UAV search deployment planner")
    parser.add_argument("--version", action="version", version=f"driftsearch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--tracks", help="drifter track CSV (default: built-in synthetic instances)")
        p.add_argument("--predictor", choices=["persistence", "linear", "external"], default="persistence")
        p.add_argument("--forecast-file", help="external per-step forecast CSV (step,lat,lon)")
        p.add_argument("--horizon", type=int, default=6)
        p.add_argument("--accident-index", type=int, default=6)

    p = sub.add_parser("predict", help="benchmark predictors on tracks")
    add_common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("plan", help="plan a single deployment and export GeoJSON")
    add_common(p)
    p.add_argument("--algo", choices=["random", "sa", "pso", "ga"], default="ga")
    p.add_argument("--uavs", type=int, default=6)
    p.add_argument("--particles", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("experiment", help="run the full comparison grid")
    add_common(p)
    p.add_argument("--config", help="experiment spec JSON")
    p.add_argument("--algo", nargs="*", choices=["random", "sa", "pso", "ga"])
    p.add_argument("--uavs", nargs="*", type=int)
    p.add_argument("--particles", nargs="*", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="out")
    p.add_argument("--maps", action="store_true", help="write per-cell GeoJSON maps")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("validate", help="run quick invariant checks")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
