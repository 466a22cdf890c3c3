"""Command-line front end: theory tables, simulations, sweeps, comparisons,
and edge-list ingestion.

Every output embeds its resolved configuration in '#'-prefixed header lines,
so a result file is self-describing and reproducible from its own header.
Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

import argparse
import csv
import io
import json
import sys

from . import analytics
from .adversary import observe_eavesdropper
from .graphs import load_edge_list
from .harness import (
    CSV_COLUMNS,
    AdversarySpec,
    ExperimentSpec,
    GraphSpec,
    run_experiment,
    sweep,
)
from .spreading import SpreadParams, simulate_diffusion, simulate_trickle, trace_to_csv, trial_stream


def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def _float_list(text):
    return [float(x) for x in text.split(",") if x]


def _add_common(p):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path (default stdout)")


def _add_experiment(p):
    p.add_argument("--protocol", choices=("trickle", "diffusion"), required=True)
    p.add_argument("--estimator", default="first-timestamp",
                   choices=("first-timestamp", "ball-centrality",
                            "timestamp-rumor-centrality", "reporting-centrality",
                            "rumor-centers"))
    p.add_argument("--adversary", default="eavesdropper",
                   choices=("eavesdropper", "spy", "snapshot"))
    p.add_argument("--graph", default="tree",
                   choices=("tree", "balanced-tree", "random-regular", "file"))
    p.add_argument("--graph-file", help="edge list path for --graph file")
    p.add_argument("--d", type=int, help="tree degree")
    p.add_argument("--n", type=int, help="node count for random-regular")
    p.add_argument("--depth", type=int, help="depth for balanced-tree")
    p.add_argument("--root-degree", type=int,
                   help="lazy-tree root degree override (d-2 reproduces the "
                        "diffusion first-timestamp closed form's setting)")
    p.add_argument("--theta", type=float, default=1)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--t", type=float, help="estimation time / max time")
    p.add_argument("--max-infections", type=int,
                   help="infection-count horizon (K); stop_time is logged")
    p.add_argument("--spy-p", type=float, help="spy corruption probability")
    p.add_argument("--dump-trace", help="write trial 0's trace CSV here")
    _add_common(p)


def _spec_from_args(args):
    graph = GraphSpec(
        kind=args.graph,
        d=args.d,
        n=args.n,
        depth=args.depth,
        path=args.graph_file,
        root_degree=args.root_degree,
    )
    params = SpreadParams(
        protocol=args.protocol,
        theta=args.theta,
        lam=args.lam,
        max_time=args.t,
        max_infections=args.max_infections,
        seed=args.seed,
    )
    adversary = AdversarySpec(
        model=args.adversary,
        p=args.spy_p,
        estimation_time=args.t,
    )
    return ExperimentSpec(
        graph=graph,
        params=params,
        adversary=adversary,
        estimator=args.estimator,
        trials=args.trials,
        master_seed=args.seed,
        workers=args.workers,
    )


def _config_header(args, extra=None):
    skip = ("func", "out")  # the file's own location is not provenance
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in skip and v is not None}
    if extra:
        cfg.update(extra)
    return "# config " + json.dumps(cfg, sort_keys=True, default=str)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_output(rows, columns, header, fmt):
    if fmt == "json":
        return json.dumps({"config": header, "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(header + "\n")
    writer = csv.DictWriter(buf, fieldnames=columns)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


THEORY_COLUMNS = ("formula_id", "d", "theta", "t", "p", "value")


def cmd_theory(args):
    rows = []
    if args.table2:
        if args.d is None or args.theta is None:
            raise ValueError("--table2 needs --d and --theta")
        d, theta = args.d[0], args.theta[0]
        cells = [
            ("first-timestamp", "trickle", analytics.trickle_ft_lower_bound(d, theta)),
            ("first-timestamp", "diffusion", analytics.diffusion_ft(d, theta)),
            ("maximum-likelihood", "trickle", analytics.trickle_ml_upper(d, theta)),
            ("maximum-likelihood", "diffusion", analytics.reporting_centrality_constant(d)),
        ]
        for estimator, protocol, tv in cells:
            rows.append({
                "formula_id": tv.formula_id,
                "d": d, "theta": theta, "t": "", "p": "",
                "value": repr(tv.value),
                "estimator": estimator, "protocol": protocol,
            })
        columns = THEORY_COLUMNS + ("estimator", "protocol")
    else:
        if not args.formula:
            raise ValueError("need --formula or --table2")
        for d in args.d or [None]:
            for theta in args.theta or [None]:
                for t in args.t or [None]:
                    for p in args.p or [None]:
                        tv = analytics.evaluate_formula(
                            args.formula, d=d, theta=theta, t=t, p=p
                        )
                        rows.append({
                            "formula_id": tv.formula_id,
                            "d": "" if tv.d is None else tv.d,
                            "theta": "" if tv.theta is None else tv.theta,
                            "t": "" if tv.t is None else tv.t,
                            "p": "" if tv.p is None else tv.p,
                            "value": repr(tv.value),
                        })
        columns = THEORY_COLUMNS
    _emit(_rows_to_output(rows, columns, _config_header(args), args.format), args.out)
    return 0


def cmd_simulate(args):
    spec = _spec_from_args(args)
    if args.dump_trace:
        rng = trial_stream(spec.master_seed, 0)
        from .harness import _build_graph, _trial_graph

        g = _trial_graph(spec, _build_graph(spec.graph, spec.master_seed))
        sim = simulate_trickle if args.protocol == "trickle" else simulate_diffusion
        trace = sim(g, spec.params, rng)
        with open(args.dump_trace, "w", encoding="utf-8") as fh:
            fh.write(trace_to_csv(trace))
    report = run_experiment(spec)
    rows = [report.csv_fields()]
    _emit(_rows_to_output(rows, CSV_COLUMNS, _config_header(args), args.format), args.out)
    return 0


def cmd_sweep(args):
    spec = _spec_from_args(args)
    values = args.values
    reports = sweep(spec, args.axis, values)
    rows = [r.csv_fields() for r in reports]
    columns = ("axis", "axis_value") + CSV_COLUMNS
    for row, value in zip(rows, values):
        row["axis"] = args.axis
        row["axis_value"] = value
    _emit(_rows_to_output(rows, columns, _config_header(args), args.format), args.out)
    return 0


def cmd_compare(args):
    """Both protocols across one axis, long format for external plotting."""
    rows = []
    header = _config_header(args, extra={"protocol": "trickle+diffusion"})
    for protocol in ("trickle", "diffusion"):
        args.protocol = protocol
        theta = args.theta
        if protocol == "trickle" and theta != int(theta):
            raise ValueError("trickle needs integer theta")
        spec = _spec_from_args(args)
        for report, value in zip(sweep(spec, args.axis, args.values), args.values):
            row = report.csv_fields()
            row["axis"] = args.axis
            row["axis_value"] = value
            rows.append(row)
    columns = ("axis", "axis_value") + CSV_COLUMNS
    _emit(_rows_to_output(rows, columns, header, args.format), args.out)
    return 0


def cmd_ingest(args):
    g = load_edge_list(args.input)
    lines = [_config_header(args)]
    lines.append(f"# nodes={g.node_count} edges={g.edge_count()}")
    lines.append("dense_id,original_id")
    for i, orig in enumerate(g.node_labels):
        lines.append(f"{i},{orig}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rumorlab",
        description="Source-deanonymization lab for P2P flooding broadcasts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theory", help="evaluate closed-form detection values")
    p.add_argument("--formula", choices=analytics.FORMULA_IDS)
    p.add_argument("--table2", action="store_true",
                   help="four-cell summary layout for one (d, theta)")
    p.add_argument("--d", type=_int_list)
    p.add_argument("--theta", type=_float_list)
    p.add_argument("--t", type=_float_list)
    p.add_argument("--p", type=_float_list)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("simulate", help="run one Monte Carlo experiment")
    _add_experiment(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run an experiment across one axis")
    _add_experiment(p)
    p.add_argument("--axis", required=True, choices=("d", "theta", "t", "p", "trials"))
    p.add_argument("--values", type=_float_list, required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="trickle vs diffusion across one axis")
    _add_experiment(p)
    p.add_argument("--axis", required=True, choices=("d", "theta", "t", "p", "trials"))
    p.add_argument("--values", type=_float_list, required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("ingest", help="load an edge list, emit the id mapping")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"rumorlab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
