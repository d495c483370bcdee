"""Command-line interface.

Subcommands: ``generate`` (random network instances), ``select`` (greedy
selection with optional brute-force comparison), ``bounds`` (closed-form
guarantee certificates), ``estimate`` (sampled or exhaustive
ratio/curvature estimation), and ``experiment`` (the table1 / optimality /
figure runners).
"""

import argparse
import json
import sys
from pathlib import Path

from .bounds import lambda_min_bounds, trace_inverse_bounds
from .exceptions import GramselError
from .experiments import (
    optimality_config,
    run_optimality_study,
    run_table1,
    selection_figure_data,
    table1_config,
    write_report,
)
from .metrics import METRIC_CHOICES, Metric, as_metric, default_regularized
from .networks import GRAPH_KINDS, GraphSpec, WeightedNetwork, generate
from .ratios import SamplePlan, estimate_alpha, estimate_gamma, exhaustive_gamma_alpha
from .selection import compare_with_optimum, greedy
from .serialize import dump_json, load_json, network_to_json, system_from_json
from .system import build_bundle


def _emit(obj, out):
    if out is None:
        json.dump(obj, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        dump_json(obj, out)
        print(f"wrote {out}")


def _load_system(path, metric=None):
    system = system_from_json(load_json(path))
    if metric is not None:
        regularized = default_regularized(system, metric)
        if regularized is not system:
            print(
                f"note: applying default epsilon = {regularized.epsilon:g} for the "
                f"trace-inverse metric (instance has no base actuators)",
                file=sys.stderr,
            )
        system = regularized
    return system


def _cmd_generate(args):
    spec = GraphSpec(
        kind=args.kind,
        n=args.n,
        seed=args.seed,
        p=args.p,
        m_attach=args.m_attach,
        arm_len=args.arm_len,
        arm_width=args.arm_width,
        symmetric=args.symmetric,
    )
    network = generate(spec)
    dump_json(network_to_json(network, epsilon=args.epsilon), args.out)
    print(
        f"wrote {args.out}: kind={spec.kind} n={network.n} "
        f"edges={len(network.edges)} shift={network.shift:.6g}"
    )
    return 0


def _cmd_select(args):
    metric = as_metric(args.metric)
    system = _load_system(args.instance, metric)
    bundle = build_bundle(system)
    report = greedy(bundle, metric, args.k)
    if args.brute:
        compare_with_optimum(report, bundle)

    print(f"greedy selection, metric={metric.value}, k={args.k}")
    print(f"{'step':>4}  {'pick':>4}  value")
    print(f"{0:>4}  {'-':>4}  {report.values[0]!r}")
    for step, (pick, value) in enumerate(zip(report.picks, report.values[1:]), 1):
        print(f"{step:>4}  {pick:>4}  {value!r}")
    if args.brute:
        print(f"optimum: {list(report.optimum_set)} value {report.optimum_value!r}")
        print(f"normalized ratio: {report.ratio!r}")
    _emit(report.to_json(), args.out)
    return 0


def _cmd_bounds(args):
    metric = as_metric(args.metric)
    if metric is Metric.LAMBDA_MIN:
        system = _load_system(args.instance)
        bound = lambda_min_bounds(build_bundle(system))
    else:
        system = _load_system(args.instance, metric)
        bound = trace_inverse_bounds(build_bundle(system))
    _emit(bound.to_json(), args.out)
    return 0


def _cmd_estimate(args):
    metric = as_metric(args.metric)
    system = _load_system(args.instance, metric)
    bundle = build_bundle(system)
    if args.exhaustive:
        gamma, alpha = exhaustive_gamma_alpha(bundle, metric)
    else:
        gamma = estimate_gamma(
            bundle, metric, SamplePlan(pairs=args.pairs, seed=args.seed)
        )
        alpha = estimate_alpha(
            bundle,
            metric,
            SamplePlan(
                pairs=args.pairs, seed=args.seed + 1, omega_cap=args.omega_cap
            ),
        )
    merged = gamma.to_json()
    alpha_json = alpha.to_json()
    merged["alpha_emp_range"] = alpha_json["alpha_emp_range"]
    merged["alpha_emp_avg"] = alpha_json["alpha_emp_avg"]
    merged["alpha_samples"] = alpha_json["samples"]
    merged["witnesses"]["alpha"] = alpha_json["witnesses"]["alpha"]
    _emit(merged, args.out)
    return 0


def _cmd_experiment(args):
    out_dir = Path(args.out_dir)
    if args.runner == "table1":
        config = table1_config(
            kinds=tuple(args.kinds.split(",")),
            n=args.n,
            instances=args.instances,
            pairs=args.pairs,
            master_seed=args.seed,
            jobs=args.jobs,
            er_p=args.er_p,
        )
        report, elapsed = run_table1(config)
        paths = write_report(report, out_dir, "table1")
        for kind, agg in report["aggregates"].items():
            print(
                f"{kind}: gamma_emp >= {agg['gamma_emp_min']:.4g}, alpha range "
                f"[{agg['alpha_min']:.4g}, {agg['alpha_max']:.4g}], "
                f"alpha avg {agg['alpha_avg_mean']:.4g}"
            )
    elif args.runner == "optimality":
        config = optimality_config(
            kinds=tuple(args.kinds.split(",")),
            n=args.n,
            k=args.k,
            instances=args.instances,
            metrics=tuple(args.metrics.split(",")),
            master_seed=args.seed,
            jobs=args.jobs,
            er_p=args.er_p,
        )
        report, elapsed = run_optimality_study(config)
        paths = write_report(report, out_dir, "optimality")
        for key, agg in report["aggregates"].items():
            print(
                f"{key}: mean ratio {agg['mean_ratio']:.4f} (raw "
                f"{agg['mean_raw_ratio']:.4f}), min {agg['min_ratio']:.4f}, "
                f"exact {agg['exact_fraction']:.2%} ({agg['count']} runs)"
            )
    else:  # figure
        raw = load_json(args.instance)
        if "adjacency" not in raw:
            raise GramselError(
                f"{args.instance} has no adjacency block; generate instances "
                f"with 'gramsel generate'"
            )
        metric = as_metric(args.metric)
        system = default_regularized(system_from_json(raw), metric)
        network = WeightedNetwork(
            a=system.a,
            edges=tuple((int(i), int(j)) for i, j in raw["adjacency"]),
            shift=float(raw.get("shift", 0.0)),
            spec=GraphSpec(
                kind=raw.get("kind", "rss"), n=system.n, seed=raw.get("seed", 0)
            ),
        )
        report = greedy(build_bundle(system), metric, args.k)
        data = selection_figure_data(network, report)
        if args.out is None:
            out_dir.mkdir(parents=True, exist_ok=True)
            target = out_dir / "figure.json"
        else:
            target = args.out
        dump_json(data, target)
        print(f"wrote {target}: {len(report.picks)} selected nodes")
        return 0
    print(f"wrote {paths[0]} and {paths[1]} ({elapsed:.1f}s)")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gramsel",
        description="Actuator selection for linear dynamical networks by greedy "
        "maximization of controllability Gramian metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a random network instance")
    p.add_argument("--kind", choices=GRAPH_KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=float, default=None, help="Erdos-Renyi edge probability")
    p.add_argument("--m-attach", type=int, default=None, help="Barabasi-Albert edges per node")
    p.add_argument("--arm-len", type=int, default=None, help="L-mesh arm length")
    p.add_argument("--arm-width", type=int, default=None, help="L-mesh arm width")
    p.add_argument("--symmetric", action="store_true", help="one shared weight per edge")
    p.add_argument("--epsilon", type=float, default=0.0, help="instance regularization")
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("select", help="greedy actuator selection on an instance")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--metric", choices=METRIC_CHOICES, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--brute", action="store_true", help="also compute the exact optimum")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("bounds", help="closed-form guarantee certificate")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--metric", choices=(Metric.LAMBDA_MIN.value, Metric.NEG_TRACE_INV.value), required=True)
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("estimate", help="estimate submodularity ratio and curvature")
    p.add_argument("--instance", type=Path, required=True)
    p.add_argument("--metric", choices=METRIC_CHOICES, required=True)
    p.add_argument("--pairs", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--omega-cap", type=int, default=None,
        help="cap |Omega| in curvature samples (default: catalog size)",
    )
    p.add_argument("--exhaustive", action="store_true", help="exact values (M <= 6)")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("experiment", help="batch experiment runners")
    runners = p.add_subparsers(dest="runner", required=True)

    t = runners.add_parser("table1", help="ratio/curvature table over network kinds")
    t.add_argument("--kinds", default="er,ba,lmesh")
    t.add_argument("--n", type=int, default=50)
    t.add_argument("--instances", type=int, default=1)
    t.add_argument("--pairs", type=int, default=5000)
    t.add_argument("--er-p", type=float, default=0.08)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--out-dir", default="out")
    t.set_defaults(func=_cmd_experiment)

    o = runners.add_parser("optimality", help="greedy versus brute force study")
    o.add_argument("--kinds", default="rss,er,ba")
    o.add_argument("--n", type=int, default=16)
    o.add_argument("--k", type=int, default=4)
    o.add_argument("--instances", type=int, default=100)
    o.add_argument("--metrics", default="lmin,ntrinv")
    o.add_argument("--er-p", type=float, default=0.25)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--jobs", type=int, default=1)
    o.add_argument("--out-dir", default="out")
    o.set_defaults(func=_cmd_experiment)

    f = runners.add_parser("figure", help="selected-node figure data for one instance")
    f.add_argument("--instance", type=Path, required=True)
    f.add_argument("--metric", choices=METRIC_CHOICES, default=Metric.NEG_TRACE_INV.value)
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--out", type=Path, default=None)
    f.add_argument("--out-dir", default="out")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--jobs", type=int, default=1)
    f.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GramselError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
