"""Curve ingestion, synthetic curves, criterion evaluation, and sweeps.

File formats:
  - session CSV: header ``epoch,train_acc,test_acc``, one row per epoch,
    0-based contiguous epochs, file name ``<model>_run<id>.csv``;
  - session JSON: object with ``model``, ``run``, ``train_acc``, ``test_acc``.

Reports carry, per (model, criterion), the mean stopping epoch and the mean
best accuracy seen before that epoch, averaged over runs; runs where a
criterion never fires contribute the full curve length and are counted in
the ``never_fired`` column.
"""

import csv
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .curve import MetricSeries
from .errors import (
    ConstraintInfeasible,
    InvalidConfig,
    NotFound,
    ParseError,
    ValidationError,
)
from .stopping import (
    AswsConfig,
    BaselineConfig,
    CriterionConfig,
    asws_window_trace,
    avg_diff_stopping,
    best_accuracy_before,
    first_fire_from_trace,
    make_monitor,
    min_diff_stopping,
    patience_stopping,
    performance_stopping,
    stopping_epoch,
)

__all__ = [
    "TrainingSession",
    "SweepSpec",
    "SweepPoint",
    "ReportRow",
    "load_sessions",
    "save_sessions",
    "synth_curve",
    "evaluate_criteria",
    "grid_search",
    "heuristic_grid_search",
    "tuned_config",
    "MODEL_TUNED_PARAMS",
    "DEFAULT_CRITERIA",
    "render_report_table",
    "write_report_csv",
    "write_decision_trace",
]


@dataclass(frozen=True)
class TrainingSession:
    """One recorded training run of one model."""

    model_name: str
    run_id: int
    train_acc: MetricSeries
    test_acc: MetricSeries

    def __post_init__(self):
        if len(self.train_acc) != len(self.test_acc):
            raise ValidationError(
                f"{self.model_name} run {self.run_id}: train/test lengths differ"
            )
        if len(self.test_acc) < 1:
            raise ValidationError(f"{self.model_name} run {self.run_id}: empty session")
        for name, series in (("train_acc", self.train_acc), ("test_acc", self.test_acc)):
            vals = series.values
            if vals.size and (vals.min() < 0.0 or vals.max() > 1.0):
                raise ValidationError(
                    f"{self.model_name} run {self.run_id}: {name} outside [0, 1]"
                )


# grid-search optima per model for the public CIFAR10 training-curve corpus:
# (gamma, n, slack_prop)
MODEL_TUNED_PARAMS: dict[str, tuple[float, int, float]] = {
    "AlexNet": (0.0, 13, 0.95),
    "fc1": (0.1, 5, 0.132),
    "fc2": (0.775, 13, 0.132),
    "GoogLeNet": (0.213, 19, 0.95),
    "ResNet34": (0.55, 17, 0.868),
    "ResNet50": (0.213, 19, 0.459),
    "ResNet101": (0.1, 15, 0.95),
    "VGG11": (0.663, 17, 0.95),
    "VGG16": (0.888, 17, 0.705),
    "VGG19": (0.1, 17, 0.623),
}


def tuned_config(model_name: str, slack: int = 20, alpha: float = 0.97, clip: int = 15) -> AswsConfig:
    """Tuned stopping configuration for one of the corpus models."""
    try:
        gamma, n, slack_prop = MODEL_TUNED_PARAMS[model_name]
    except KeyError:
        raise NotFound(f"no tuned parameters for model {model_name!r}") from None
    return AswsConfig(gamma=gamma, clip=clip, n=n, slack=slack, slack_prop=slack_prop, alpha=alpha)


def DEFAULT_CRITERIA() -> dict[str, CriterionConfig]:
    """The stopping test plus the four tuned heuristic baselines."""
    return {
        "asws": AswsConfig(),
        "performance": performance_stopping(60),
        "patience": patience_stopping(3),
        "min_diff": min_diff_stopping(27, 0.013),
        "avg_diff": avg_diff_stopping(150, 0.001),
    }


# --- ingestion ----------------------------------------------------------------

_CSV_NAME = re.compile(r"^(?P<model>.+)_run(?P<run>\d+)\.csv$")
_CSV_HEADER = ["epoch", "train_acc", "test_acc"]


def _parse_acc(token: str, path, line) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ValidationError(f"non-numeric accuracy {token!r}", path=path, line=line) from None
    if not 0.0 <= value <= 1.0 or not math.isfinite(value):
        raise ValidationError(f"accuracy {value} outside [0, 1]", path=path, line=line)
    return value


def _load_csv_session(path: Path) -> TrainingSession:
    m = _CSV_NAME.match(path.name)
    if not m:
        raise ParseError(
            f"file name {path.name!r} does not match '<model>_run<id>.csv'", path=str(path)
        )
    train, test = [], []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _CSV_HEADER:
            raise ParseError(f"expected header {','.join(_CSV_HEADER)}", path=str(path), line=1)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise ParseError(f"expected 3 columns, got {len(row)}", path=str(path), line=lineno)
            try:
                epoch = int(row[0])
            except ValueError:
                raise ParseError(f"non-integer epoch {row[0]!r}", path=str(path), line=lineno) from None
            if epoch != lineno - 2:
                raise ParseError(
                    f"epochs must be 0-based and contiguous; expected {lineno - 2}, got {epoch}",
                    path=str(path),
                    line=lineno,
                )
            train.append(_parse_acc(row[1], str(path), lineno))
            test.append(_parse_acc(row[2], str(path), lineno))
    if not test:
        raise ParseError("session holds no epochs", path=str(path))
    return TrainingSession(m["model"], int(m["run"]), MetricSeries(train), MetricSeries(test))


def _load_json_session(path: Path) -> TrainingSession:
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", path=str(path), line=exc.lineno) from None
    if not isinstance(payload, dict):
        raise ParseError("expected a JSON object", path=str(path))
    for key in ("model", "run", "train_acc", "test_acc"):
        if key not in payload:
            raise ParseError(f"missing field {key!r}", path=str(path))
    if not isinstance(payload["run"], int) or payload["run"] < 0:
        raise ValidationError("'run' must be a non-negative integer", path=str(path))
    accs = {}
    for key in ("train_acc", "test_acc"):
        seq = payload[key]
        if not isinstance(seq, list):
            raise ParseError(f"{key!r} must be an array", path=str(path))
        accs[key] = [_parse_acc(str(v), str(path), None) for v in seq]
    return TrainingSession(
        str(payload["model"]), payload["run"],
        MetricSeries(accs["train_acc"]), MetricSeries(accs["test_acc"]),
    )


def load_sessions(path: Union[str, Path], format: str = "csv") -> list[TrainingSession]:
    """Load every session file under a directory (or one file).

    Sessions come back sorted by (model, run) so downstream results do not
    depend on directory listing order.
    """
    if format not in ("csv", "json"):
        raise InvalidConfig(f"unknown session format {format!r}")
    root = Path(path)
    if not root.exists():
        raise NotFound(f"no such path: {root}")
    if root.is_file():
        files = [root]
    else:
        files = sorted(root.glob(f"*.{format}"))
    loader = _load_csv_session if format == "csv" else _load_json_session
    sessions = [loader(f) for f in files]
    sessions.sort(key=lambda s: (s.model_name, s.run_id))
    return sessions


def save_sessions(sessions: Sequence[TrainingSession], path: Union[str, Path], format: str = "csv") -> list[Path]:
    """Write sessions in the documented layout; returns the paths written."""
    if format not in ("csv", "json"):
        raise InvalidConfig(f"unknown session format {format!r}")
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for s in sessions:
        target = root / f"{s.model_name}_run{s.run_id}.{format}"
        if format == "csv":
            with target.open("w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(_CSV_HEADER)
                for epoch, (tr, te) in enumerate(zip(s.train_acc, s.test_acc)):
                    writer.writerow([epoch, repr(tr), repr(te)])
        else:
            target.write_text(json.dumps({
                "model": s.model_name,
                "run": s.run_id,
                "train_acc": list(s.train_acc),
                "test_acc": list(s.test_acc),
            }))
        written.append(target)
    return written


# --- synthetic curves -----------------------------------------------------------


def synth_curve(
    asymptote: float, time_constant: float, noise_sd: float, length: int, seed: int
) -> MetricSeries:
    """Saturating-exponential accuracy curve with seeded Gaussian noise.

    v[i] = clamp(asymptote * (1 - exp(-i / time_constant)) + eps_i, 0, 1)
    with eps_i drawn from numpy's default_rng(seed) (PCG64); the same seed
    always reproduces the same curve.
    """
    if not 0.0 < asymptote <= 1.0:
        raise InvalidConfig(f"asymptote must lie in (0, 1], got {asymptote}")
    if time_constant <= 0:
        raise InvalidConfig(f"time_constant must be positive, got {time_constant}")
    if noise_sd < 0:
        raise InvalidConfig(f"noise_sd must be non-negative, got {noise_sd}")
    if length < 1:
        raise InvalidConfig(f"length must be >= 1, got {length}")
    rng = np.random.default_rng(seed)
    i = np.arange(length)
    eps = rng.normal(0.0, noise_sd, length) if noise_sd > 0 else np.zeros(length)
    return MetricSeries(np.clip(asymptote * (1.0 - np.exp(-i / time_constant)) + eps, 0.0, 1.0))


def synth_sessions(
    runs: int, length: int = 200, asymptote: float = 0.9, time_constant: float = 20.0,
    noise_sd: float = 1e-3, model_name: str = "synthetic", seed0: int = 0,
) -> list[TrainingSession]:
    """A small corpus of seeded synthetic sessions (test accuracy == train)."""
    sessions = []
    for r in range(runs):
        curve = synth_curve(asymptote, time_constant, noise_sd, length, seed0 + r)
        sessions.append(TrainingSession(model_name, r, curve, curve))
    return sessions


# --- evaluation -------------------------------------------------------------------


@dataclass(frozen=True)
class ReportRow:
    """Mean outcome of one criterion on one model's runs."""

    model_name: str
    criterion: str
    mean_stop_epoch: float
    mean_best_accuracy: float
    runs: int
    never_fired: int


def _run_outcome(series: MetricSeries, criterion: CriterionConfig) -> tuple[int, float, bool]:
    epoch = stopping_epoch(series, criterion)
    never = epoch is None
    if never:
        epoch = len(series)
    return epoch, best_accuracy_before(series, max(epoch, 1)), never


def evaluate_criteria(
    sessions: Sequence[TrainingSession], criteria: Mapping[str, CriterionConfig]
) -> list[ReportRow]:
    """Mean stopping epoch and best-accuracy-before-stop per (model, criterion).

    Rows come back sorted by model then criterion label, so the report does
    not depend on input ordering.
    """
    if not sessions:
        raise InvalidConfig("evaluate_criteria needs at least one session")
    by_model: dict[str, list[TrainingSession]] = {}
    for s in sessions:
        by_model.setdefault(s.model_name, []).append(s)
    rows = []
    for model in sorted(by_model):
        runs = sorted(by_model[model], key=lambda s: s.run_id)
        for label in sorted(criteria):
            criterion = criteria[label]
            epochs, accs, nevers = [], [], 0
            for s in runs:
                epoch, acc, never = _run_outcome(s.test_acc, criterion)
                epochs.append(epoch)
                accs.append(acc)
                nevers += never
            rows.append(ReportRow(
                model_name=model,
                criterion=label,
                mean_stop_epoch=float(np.mean(epochs)),
                mean_best_accuracy=float(np.mean(accs)),
                runs=len(runs),
                never_fired=nevers,
            ))
    return rows


# --- sweeps -----------------------------------------------------------------------

ASWS_GAMMA_GRID = tuple(float(g) for g in np.linspace(0.1, 0.8875, 8))
ASWS_N_GRID = tuple(range(5, 21, 2))
ASWS_SLACK_PROP_GRID = tuple(float(p) for p in np.linspace(0.05, 0.95, 12))

HEURISTIC_PATIENCE_GRID = tuple(range(1, 31, 2))
HEURISTIC_WINDOW_GRID = tuple(range(25, 151, 25))
HEURISTIC_MIN_DELTA_GRID = tuple(float(d) for d in np.linspace(0.001, 0.025, 7))


@dataclass(frozen=True)
class SweepSpec:
    """Grids for the stopping-test sweep plus the accuracy constraint."""

    gamma_grid: tuple[float, ...] = ASWS_GAMMA_GRID
    n_grid: tuple[int, ...] = ASWS_N_GRID
    slack_prop_grid: tuple[float, ...] = ASWS_SLACK_PROP_GRID
    accuracy_slack: float = 0.005

    def __post_init__(self):
        if not (self.gamma_grid and self.n_grid and self.slack_prop_grid):
            raise InvalidConfig("sweep grids must be non-empty")
        if any(not 0.0 <= g < 1.0 for g in self.gamma_grid):
            raise InvalidConfig("gamma grid values must lie in [0, 1)")
        if any(n < 3 for n in self.n_grid):
            raise InvalidConfig("n grid values must be >= 3")
        if any(not 0.0 < p <= 1.0 for p in self.slack_prop_grid):
            raise InvalidConfig("slack_prop grid values must lie in (0, 1]")
        if self.accuracy_slack < 0:
            raise InvalidConfig("accuracy_slack must be >= 0")

    @property
    def size(self) -> int:
        return len(self.gamma_grid) * len(self.n_grid) * len(self.slack_prop_grid)


@dataclass(frozen=True)
class SweepPoint:
    """Outcome of one swept configuration over the whole corpus."""

    config: CriterionConfig
    mean_stop_epoch: float
    mean_best_accuracy: float
    never_fired: int


def _asws_unit(args) -> list[tuple[int, int, int, float, float, int]]:
    """Evaluate one (gamma, n) cell for every slack_prop; module-level for pickling."""
    gi, ni, gamma, n, clip, slack, alpha, slack_props, curves = args
    traces = [asws_window_trace(MetricSeries(values), gamma, clip, n) for values in curves]
    out = []
    for pi, slack_prop in enumerate(slack_props):
        config = AswsConfig(gamma=gamma, clip=clip, n=n, slack=slack, slack_prop=slack_prop, alpha=alpha)
        epochs, accs, nevers = [], [], 0
        for values, trace in zip(curves, traces):
            epoch = first_fire_from_trace(trace, config)
            never = epoch is None
            if never:
                epoch = len(values)
                nevers += 1
            epochs.append(epoch)
            accs.append(float(np.max(values[: max(epoch, 1)])))
        out.append((gi, ni, pi, float(np.mean(epochs)), float(np.mean(accs)), nevers))
    return out


def _selection_key(point: SweepPoint):
    cfg = point.config
    return (point.mean_stop_epoch, cfg.n, cfg.gamma, -cfg.slack_prop)


def grid_search(
    sessions: Sequence[TrainingSession],
    spec: SweepSpec,
    slack: int = 20,
    alpha: float = 0.97,
    clip: int = 15,
    workers: int = 1,
) -> tuple[AswsConfig, list[SweepPoint]]:
    """Exhaustive sweep of the stopping test's (gamma, n, slack_prop) lattice.

    Among configurations whose mean best accuracy stays within
    spec.accuracy_slack of the performance baseline's, returns the one with
    the smallest mean stopping epoch; ties break deterministically toward
    smaller n, then smaller gamma, then larger slack_prop. The full lattice
    is returned alongside for sensitivity reports.

    The lattice is evaluated per (gamma, n) cell so all slack_prop values
    share one set of window traces; cells are independent, so `workers`
    processes may evaluate them in parallel with bit-identical results.
    """
    if not sessions:
        raise InvalidConfig("grid_search needs at least one session")
    reference_acc = float(np.mean([
        _run_outcome(s.test_acc, performance_stopping(60))[1] for s in sessions
    ]))

    curves = [s.test_acc.values for s in sessions]
    jobs = [
        (gi, ni, gamma, n, clip, slack, alpha, tuple(spec.slack_prop_grid), curves)
        for gi, gamma in enumerate(spec.gamma_grid)
        for ni, n in enumerate(spec.n_grid)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_asws_unit, jobs))
    else:
        chunks = [_asws_unit(job) for job in jobs]

    cells: dict[tuple[int, int, int], tuple[float, float, int]] = {}
    for chunk in chunks:
        for gi, ni, pi, epoch, acc, nevers in chunk:
            cells[(gi, ni, pi)] = (epoch, acc, nevers)

    lattice = []
    for gi, gamma in enumerate(spec.gamma_grid):
        for ni, n in enumerate(spec.n_grid):
            for pi, slack_prop in enumerate(spec.slack_prop_grid):
                epoch, acc, nevers = cells[(gi, ni, pi)]
                config = AswsConfig(
                    gamma=gamma, clip=clip, n=n, slack=slack, slack_prop=slack_prop, alpha=alpha
                )
                lattice.append(SweepPoint(config, epoch, acc, nevers))

    feasible = [p for p in lattice if p.mean_best_accuracy >= reference_acc - spec.accuracy_slack]
    if not feasible:
        best_any = min(lattice, key=_selection_key)
        raise ConstraintInfeasible(
            f"no configuration reached accuracy {reference_acc} - {spec.accuracy_slack}",
            unconstrained_best=best_any.config,
        )
    return min(feasible, key=_selection_key).config, lattice


def heuristic_grid_search(
    sessions: Sequence[TrainingSession],
    variant: str,
    patience_grid: Sequence[int] = HEURISTIC_PATIENCE_GRID,
    window_grid: Sequence[int] = HEURISTIC_WINDOW_GRID,
    min_delta_grid: Sequence[float] = HEURISTIC_MIN_DELTA_GRID,
) -> tuple[BaselineConfig, list[SweepPoint]]:
    """Sweep one heuristic baseline's lattice, maximizing mean accuracy.

    Ties break toward the earlier mean stopping epoch, then toward smaller
    hyperparameter values, deterministically.
    """
    if not sessions:
        raise InvalidConfig("heuristic_grid_search needs at least one session")
    if variant == "patience":
        candidates = [patience_stopping(p) for p in patience_grid]
    elif variant == "min_diff":
        candidates = [min_diff_stopping(p, d) for p in patience_grid for d in min_delta_grid]
    elif variant == "avg_diff":
        candidates = [avg_diff_stopping(w, d) for w in window_grid for d in min_delta_grid]
    elif variant == "performance":
        candidates = [performance_stopping(k) for k in patience_grid]
    else:
        raise InvalidConfig(f"unknown baseline variant {variant!r}")

    lattice = []
    for config in candidates:
        epochs, accs, nevers = [], [], 0
        for s in sessions:
            epoch, acc, never = _run_outcome(s.test_acc, config)
            epochs.append(epoch)
            accs.append(acc)
            nevers += never
        lattice.append(SweepPoint(config, float(np.mean(epochs)), float(np.mean(accs)), nevers))
    best = min(
        lattice,
        key=lambda p: (
            -p.mean_best_accuracy,
            p.mean_stop_epoch,
            p.config.K,
            p.config.patience,
            p.config.window,
            p.config.min_delta,
        ),
    )
    return best.config, lattice


# --- reports ----------------------------------------------------------------------

_REPORT_HEADER = ["model", "criterion", "mean_stop_epoch", "mean_best_accuracy", "runs", "never_fired"]


def write_report_csv(rows: Sequence[ReportRow], target) -> None:
    """Write report rows as CSV to a path or text file object."""
    own = isinstance(target, (str, Path))
    fh = open(target, "w", newline="") if own else target
    try:
        writer = csv.writer(fh)
        writer.writerow(_REPORT_HEADER)
        for r in rows:
            writer.writerow([
                r.model_name, r.criterion,
                f"{r.mean_stop_epoch:.4f}", f"{r.mean_best_accuracy:.6f}",
                r.runs, r.never_fired,
            ])
    finally:
        if own:
            fh.close()


def render_report_table(rows: Sequence[ReportRow]) -> str:
    """Aligned text table of report rows."""
    cells = [_REPORT_HEADER] + [
        [r.model_name, r.criterion, f"{r.mean_stop_epoch:.1f}",
         f"{r.mean_best_accuracy:.5f}", str(r.runs), str(r.never_fired)]
        for r in rows
    ]
    widths = [max(len(row[c]) for row in cells) for c in range(len(_REPORT_HEADER))]
    lines = []
    for i, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def write_decision_trace(series: MetricSeries, config: AswsConfig, target) -> None:
    """Per-epoch trace CSV (epoch,shapiro_p,ttest_p,votes) for plotting.

    The p-values are those of the newest window at each epoch; epochs too
    early to evaluate leave the fields empty.
    """
    monitor = make_monitor(config)
    own = isinstance(target, (str, Path))
    fh = open(target, "w", newline="") if own else target
    try:
        writer = csv.writer(fh)
        writer.writerow(["epoch", "shapiro_p", "ttest_p", "votes"])
        for epoch, value in enumerate(series):
            decision = monitor.update(value)
            if decision is None:
                writer.writerow([epoch, "", "", ""])
            else:
                last = decision.window_results[-1]
                writer.writerow([
                    epoch,
                    "" if last.shapiro_p is None else f"{last.shapiro_p:.9f}",
                    "" if last.ttest_p is None else f"{last.ttest_p:.9f}",
                    decision.votes,
                ])
    finally:
        if own:
            fh.close()
