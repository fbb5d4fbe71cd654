"""Command-line entry point: evaluate, sweep, simulate, serve."""

import argparse
import json
import sys
from pathlib import Path

from .errors import AswsError
from .harness import (
    DEFAULT_CRITERIA,
    SweepSpec,
    evaluate_criteria,
    grid_search,
    load_sessions,
    render_report_table,
    save_sessions,
    synth_sessions,
    write_report_csv,
)
from .sidecar import serve, serve_unix_socket
from .stopping import AswsConfig, BaselineConfig

import numpy as np


def _criterion_from_mapping(mapping):
    fields = dict(mapping)
    kind = fields.pop("kind", "asws")
    if kind == "asws":
        return AswsConfig(**fields)
    return BaselineConfig(variant=kind, **fields)


def _load_criteria(path):
    payload = json.loads(Path(path).read_text())
    if "criteria" in payload:
        return {label: _criterion_from_mapping(m) for label, m in payload["criteria"].items()}
    return {"asws": _criterion_from_mapping(payload)}


def _grid_axis(value, integer=False):
    if isinstance(value, list):
        return tuple(int(v) if integer else float(v) for v in value)
    if isinstance(value, dict):
        if integer:
            return tuple(range(int(value["start"]), int(value["stop"]) + 1, int(value.get("step", 1))))
        return tuple(float(x) for x in np.linspace(value["start"], value["stop"], int(value["count"])))
    raise AswsError(f"grid axis must be a list or a start/stop object, got {value!r}")


def _load_sweep_spec(path):
    if path is None:
        return SweepSpec()
    payload = json.loads(Path(path).read_text())
    kwargs = {}
    if "gamma_grid" in payload:
        kwargs["gamma_grid"] = _grid_axis(payload["gamma_grid"])
    if "n_grid" in payload:
        kwargs["n_grid"] = _grid_axis(payload["n_grid"], integer=True)
    if "slack_prop_grid" in payload:
        kwargs["slack_prop_grid"] = _grid_axis(payload["slack_prop_grid"])
    if "accuracy_slack" in payload:
        kwargs["accuracy_slack"] = float(payload["accuracy_slack"])
    return SweepSpec(**kwargs)


def _load_default_config(path):
    if path is None:
        return None
    return _criterion_from_mapping(json.loads(Path(path).read_text()))


def _cmd_evaluate(args):
    sessions = load_sessions(args.data, args.format)
    criteria = _load_criteria(args.config) if args.config else DEFAULT_CRITERIA()
    rows = evaluate_criteria(sessions, criteria)
    if args.out:
        write_report_csv(rows, args.out)
    sys.stdout.write(render_report_table(rows))
    return 0


def _cmd_sweep(args):
    sessions = load_sessions(args.data, args.format)
    spec = _load_sweep_spec(args.spec)
    best, lattice = grid_search(
        sessions, spec, slack=args.slack, alpha=args.alpha, workers=args.workers
    )
    if args.out:
        import csv as _csv

        with open(args.out, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["gamma", "n", "slack_prop", "mean_stop_epoch",
                             "mean_best_accuracy", "never_fired"])
            for p in lattice:
                writer.writerow([
                    repr(p.config.gamma), p.config.n, repr(p.config.slack_prop),
                    f"{p.mean_stop_epoch:.4f}", f"{p.mean_best_accuracy:.6f}", p.never_fired,
                ])
    print(f"evaluated {len(lattice)} configurations")
    print(f"best: gamma={best.gamma!r} n={best.n} slack_prop={best.slack_prop!r} "
          f"slack={best.slack} alpha={best.alpha}")
    return 0


def _cmd_simulate(args):
    sessions = synth_sessions(
        runs=args.runs, length=args.length, asymptote=args.asymptote,
        time_constant=args.tau, noise_sd=args.noise, model_name=args.model,
        seed0=args.seed,
    )
    if args.out:
        written = save_sessions(sessions, args.out, args.format)
        print(f"wrote {len(written)} session files to {args.out}")
    else:
        writer = sys.stdout
        writer.write("epoch,train_acc,test_acc\n")
        for epoch, value in enumerate(sessions[0].test_acc):
            writer.write(f"{epoch},{value!r},{value!r}\n")
    return 0


def _cmd_serve(args):
    default = _load_default_config(args.config)
    if args.socket:
        return serve_unix_socket(args.socket, default)
    return serve(sys.stdin, sys.stdout, default)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="asws",
        description="Statistical early-stopping decisions over test-accuracy curves",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="evaluate stopping criteria over recorded sessions")
    p.add_argument("--data", required=True, help="directory of session files")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--config", help="JSON criteria file")
    p.add_argument("--out", help="write the report as CSV here")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("sweep", help="grid-search stopping hyperparameters")
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--spec", help="JSON sweep spec (grids and accuracy_slack)")
    p.add_argument("--slack", type=int, default=20)
    p.add_argument("--alpha", type=float, default=0.97)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the full lattice as CSV here")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="generate seeded synthetic training sessions")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--asymptote", type=float, default=0.9)
    p.add_argument("--tau", type=float, default=20.0)
    p.add_argument("--noise", type=float, default=1e-3)
    p.add_argument("--length", type=int, default=400)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--model", default="synthetic")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="directory for session files; stdout CSV otherwise")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("serve", help="run the line-protocol sidecar")
    p.add_argument("--socket", help="serve one connection on this unix socket instead of stdio")
    p.add_argument("--config", help="JSON file with default configuration values")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AswsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
