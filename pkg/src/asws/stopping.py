"""Stopping criteria over accuracy curves.

The primary criterion combines two hypothesis tests over a sliding window
of the curve: a Shapiro-Wilk normality test on windows of the smoothed
curve, and a zero-mean one-sample t-test on windows of the raw finite
difference. A window casts a vote when neither test rejects its null at
significance level 1 - alpha; training is declared stopped when more than
slack_prop * slack of the most recent `slack` windows vote.

Note the statistical caveat: a vote *accepts* two null hypotheses (the
recent curve looks normal, its drift looks like zero). Accepting a null at
confidence alpha is not a valid inference, but it is the published rule
this package reproduces; see the README.

Four heuristic baselines are provided with the same evaluator/monitor
surface: performance (no new maximum for K epochs), patience (consecutive
strict decreases), minimum-difference (run of epochs that fail to improve
the best by a delta), and average-difference (trailing-window mean change
below a delta).

All criteria are exposed both as whole-curve evaluators and as streaming
per-epoch monitors; feeding a curve epoch-by-epoch to a monitor yields
exactly the whole-curve decisions on each prefix.
"""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

import numpy as np

from .curve import MetricSeries, geometric_weight_sums, smooth_value_at, smooth_values
from .errors import DegenerateSample, InsufficientData, InvalidConfig, InvalidEpoch
from .stats import shapiro_wilk, t_test_one_sample

__all__ = [
    "AswsConfig",
    "BaselineConfig",
    "StopDecision",
    "WindowResult",
    "AswsMonitor",
    "BaselineMonitor",
    "asws_evaluate",
    "baseline_evaluate",
    "stopping_epoch",
    "best_accuracy_before",
    "performance_stopping",
    "patience_stopping",
    "min_diff_stopping",
    "avg_diff_stopping",
    "AswsWindowTrace",
    "asws_window_trace",
    "first_fire_from_trace",
]


@dataclass(frozen=True)
class AswsConfig:
    """Hyperparameters of the windowed two-test stopping rule.

    alpha is the desired confidence that learning has stopped; each test
    must fail to reject its null at significance level 1 - alpha for a
    window to vote. use_shapiro / use_ttest disable one of the two tests
    for ablation runs.
    """

    gamma: float = 0.2
    clip: int = 15
    n: int = 19
    slack: int = 20
    slack_prop: float = 0.5
    alpha: float = 0.97
    use_shapiro: bool = True
    use_ttest: bool = True

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise InvalidConfig(f"gamma must lie in [0, 1), got {self.gamma}")
        if self.clip < 1:
            raise InvalidConfig(f"clip must be >= 1, got {self.clip}")
        if self.n < 3:
            raise InvalidConfig(f"window sample size must be >= 3, got {self.n}")
        if self.slack < 1:
            raise InvalidConfig(f"slack must be >= 1, got {self.slack}")
        if not 0.0 < self.slack_prop <= 1.0:
            raise InvalidConfig(f"slack_prop must lie in (0, 1], got {self.slack_prop}")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidConfig(f"alpha must lie in (0, 1), got {self.alpha}")
        if not (self.use_shapiro or self.use_ttest):
            raise InvalidConfig("at least one of the two tests must stay enabled")

    @property
    def reject_level(self) -> float:
        """Significance level each test must fail to reject at."""
        return 1.0 - self.alpha

    @property
    def required_votes(self) -> float:
        """Vote count that must be strictly exceeded to stop."""
        return self.slack_prop * self.slack


class WindowResult(NamedTuple):
    """Per-window p-values; None marks a degenerate (zero-variance) window."""

    index: int
    shapiro_p: Optional[float]
    ttest_p: Optional[float]


@dataclass(frozen=True)
class StopDecision:
    """Verdict of a stopping criterion plus its diagnostics."""

    stop: bool
    votes: int = 0
    required: float = 0.0
    window_results: tuple[WindowResult, ...] = ()
    diagnostics: dict = field(default_factory=dict)


VARIANTS = ("performance", "patience", "min_diff", "avg_diff")


@dataclass(frozen=True)
class BaselineConfig:
    """One of the four heuristic criteria; only the variant's fields matter."""

    variant: str
    K: int = 60
    patience: int = 3
    min_delta: float = 0.0
    window: int = 150

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidConfig(f"unknown baseline variant {self.variant!r}")
        if self.variant == "performance" and self.K < 1:
            raise InvalidConfig("performance horizon K must be >= 1")
        if self.variant in ("patience", "min_diff") and self.patience < 1:
            raise InvalidConfig("patience must be >= 1")
        if self.variant == "avg_diff" and self.window < 1:
            raise InvalidConfig("window must be >= 1")
        if self.variant in ("min_diff", "avg_diff") and self.min_delta < 0:
            raise InvalidConfig("min_delta must be >= 0")

    @property
    def min_length(self) -> int:
        """Shortest series the variant can be evaluated on."""
        return self.window + 1 if self.variant == "avg_diff" else 2


def performance_stopping(K: int = 60) -> BaselineConfig:
    """Stop when no new maximum accuracy has appeared for K epochs."""
    return BaselineConfig("performance", K=K)


def patience_stopping(patience: int = 3) -> BaselineConfig:
    """Stop after `patience` consecutive strict decreases."""
    return BaselineConfig("patience", patience=patience)


def min_diff_stopping(patience: int = 27, min_delta: float = 0.013) -> BaselineConfig:
    """Stop after `patience` epochs that each fail to beat the best by min_delta."""
    return BaselineConfig("min_diff", patience=patience, min_delta=min_delta)


def avg_diff_stopping(window: int = 150, min_delta: float = 0.001) -> BaselineConfig:
    """Stop when the mean change over the last `window` epochs drops below min_delta."""
    return BaselineConfig("avg_diff", window=window, min_delta=min_delta)


CriterionConfig = Union[AswsConfig, BaselineConfig]


# --- window test pair ----------------------------------------------------


def _window_pair(smoothed_window, delta_window) -> tuple[Optional[float], Optional[float]]:
    """(shapiro p, t-test p) for one window pair; None where degenerate."""
    try:
        sp = shapiro_wilk(smoothed_window).p_value
    except DegenerateSample:
        sp = None
    try:
        tp = t_test_one_sample(delta_window, 0.0).p_value
    except DegenerateSample:
        tp = None
    return sp, tp


def _vote(sp: Optional[float], tp: Optional[float], config: AswsConfig) -> bool:
    # degenerate windows never vote
    level = config.reject_level
    if config.use_shapiro and (sp is None or sp <= level):
        return False
    if config.use_ttest and (tp is None or tp <= level):
        return False
    return True


# --- whole-curve evaluator ------------------------------------------------


def asws_evaluate(series: MetricSeries, config: AswsConfig) -> StopDecision:
    """Evaluate the two-test stopping rule on a whole curve.

    Requires strictly more epochs than the window size n; shorter series
    raise InsufficientData, which callers should read as "keep training"
    rather than as a no-vote verdict.
    """
    k = len(series)
    if k <= config.n:
        raise InsufficientData(
            f"need more than n={config.n} epochs to evaluate, got {k}"
        )
    values = series.values
    smoothed = smooth_values(values, config.gamma, config.clip)
    deltas = np.gradient(values)

    nwin = k - config.n + 1
    consult = min(config.slack, nwin)
    votes = 0
    results = []
    for i in range(nwin - consult, nwin):
        sp, tp = _window_pair(smoothed[i : i + config.n], deltas[i : i + config.n])
        results.append(WindowResult(i, sp, tp))
        if _vote(sp, tp, config):
            votes += 1
    required = config.required_votes
    return StopDecision(
        stop=votes > required,
        votes=votes,
        required=required,
        window_results=tuple(results),
    )


# --- streaming monitor ------------------------------------------------------


class AswsMonitor:
    """Streaming per-epoch monitor equivalent to the whole-curve evaluator.

    After each update the decision equals asws_evaluate on the prefix seen
    so far, at O(1) amortized hypothesis tests per epoch: the smoothed
    curve is causal, so each window's Shapiro result is computed once, and
    only the newest difference window (whose trailing one-sided difference
    is provisional) is retested as the curve grows.

    Single-owner mutable state; not thread-safe.
    """

    def __init__(self, config: AswsConfig):
        self.config = config
        self._values: list[float] = []
        self._smoothed: list[float] = []
        self._deltas: list[float] = []
        self._norms = geometric_weight_sums(config.gamma, 0)
        self._shapiro_p: list[Optional[float]] = []
        self._ttest_final_p: list[Optional[float]] = []

    def __len__(self) -> int:
        return len(self._values)

    def update(self, value: float) -> Optional[StopDecision]:
        """Record one epoch; returns None while the curve is still too short."""
        if not np.isfinite(value):
            raise InvalidConfig("accuracy values must be finite")
        cfg = self.config
        v = self._values
        v.append(float(value))
        k = len(v)
        i = k - 1

        # smoothed value for the new index (same arithmetic as smooth_values)
        m = min(i, cfg.clip)
        while len(self._norms) <= m:
            self._norms.append(cfg.gamma * self._norms[-1] + 1.0)
        self._smoothed.append(smooth_value_at(v, i, cfg.gamma, cfg.clip, self._norms[m]))

        # finite differences: promote the previous tail to central, append one-sided
        if k == 2:
            self._deltas = [v[1] - v[0], v[1] - v[0]]
        elif k > 2:
            self._deltas[i - 1] = (v[i] - v[i - 2]) / 2.0
            self._deltas.append(v[i] - v[i - 1])

        n = cfg.n
        if k >= n:
            # the newest smoothed window is final immediately
            w = np.asarray(self._smoothed[k - n : k])
            try:
                sp = shapiro_wilk(w).p_value
            except DegenerateSample:
                sp = None
            self._shapiro_p.append(sp)
        if k >= n + 1:
            # difference window k-n-1 no longer touches the provisional tail
            j = k - n - 1
            dw = np.asarray(self._deltas[j : j + n])
            try:
                tp = t_test_one_sample(dw, 0.0).p_value
            except DegenerateSample:
                tp = None
            self._ttest_final_p.append(tp)

        if k <= n:
            return None
        return self._decide()

    def _decide(self) -> StopDecision:
        cfg = self.config
        k = len(self._values)
        i_last = k - cfg.n
        consult = min(cfg.slack, i_last + 1)

        dw = np.asarray(self._deltas[i_last : i_last + cfg.n])
        try:
            prov_tp = t_test_one_sample(dw, 0.0).p_value
        except DegenerateSample:
            prov_tp = None

        votes = 0
        results = []
        for i in range(i_last - consult + 1, i_last + 1):
            sp = self._shapiro_p[i]
            tp = prov_tp if i == i_last else self._ttest_final_p[i]
            results.append(WindowResult(i, sp, tp))
            if _vote(sp, tp, cfg):
                votes += 1
        required = cfg.required_votes
        return StopDecision(
            stop=votes > required,
            votes=votes,
            required=required,
            window_results=tuple(results),
        )

    def reset(self) -> None:
        self.__init__(self.config)


# --- sweep fast path ---------------------------------------------------------


@dataclass
class AswsWindowTrace:
    """Per-window p-values of one curve under fixed (gamma, clip, n).

    shapiro_p[i] and ttest_final_p[i] cover window i of the full curve;
    ttest_prov_p[e - n] is the t-test of the newest window as it looked at
    the prefix ending at epoch e, whose trailing difference is one-sided.
    Shared across slack / slack_prop / alpha values by the sweep.
    """

    n: int
    length: int
    shapiro_p: list[Optional[float]]
    ttest_final_p: list[Optional[float]]
    ttest_prov_p: list[Optional[float]]


def asws_window_trace(series: MetricSeries, gamma: float, clip: int, n: int) -> AswsWindowTrace:
    """Compute every window's test pair once for sweep reuse."""
    k = len(series)
    if k < n:
        return AswsWindowTrace(n, k, [], [], [])
    values = series.values
    smoothed = smooth_values(values, gamma, clip)
    deltas = np.gradient(values) if k >= 2 else np.zeros(k)

    shapiro_p: list[Optional[float]] = []
    for i in range(k - n + 1):
        try:
            shapiro_p.append(shapiro_wilk(smoothed[i : i + n]).p_value)
        except DegenerateSample:
            shapiro_p.append(None)

    ttest_final_p: list[Optional[float]] = []
    for i in range(k - n + 1):
        try:
            ttest_final_p.append(t_test_one_sample(deltas[i : i + n], 0.0).p_value)
        except DegenerateSample:
            ttest_final_p.append(None)

    ttest_prov_p: list[Optional[float]] = []
    for e in range(n, k):
        i_last = e + 1 - n
        win = np.empty(n)
        win[: n - 1] = deltas[i_last : e]
        win[n - 1] = values[e] - values[e - 1]
        try:
            ttest_prov_p.append(t_test_one_sample(win, 0.0).p_value)
        except DegenerateSample:
            ttest_prov_p.append(None)
    return AswsWindowTrace(n, k, shapiro_p, ttest_final_p, ttest_prov_p)


def first_fire_from_trace(trace: AswsWindowTrace, config: AswsConfig) -> Optional[int]:
    """First epoch index the rule fires at, per the trace; None if never.

    Matches stopping_epoch(series, config) exactly for the series and
    (gamma, clip, n) the trace was computed from.
    """
    if config.n != trace.n:
        raise InvalidConfig("trace was computed for a different window size")
    k = trace.length
    if k <= config.n:
        return None
    final_vote = [
        _vote(sp, tp, config)
        for sp, tp in zip(trace.shapiro_p, trace.ttest_final_p)
    ]
    cum = np.cumsum([0] + [int(b) for b in final_vote])
    required = config.required_votes
    for e in range(config.n, k):
        i_last = e + 1 - config.n
        consult = min(config.slack, i_last + 1)
        lo = i_last - consult + 1
        votes = int(cum[i_last] - cum[lo])
        prov_tp = trace.ttest_prov_p[e - config.n]
        if _vote(trace.shapiro_p[i_last], prov_tp, config):
            votes += 1
        if votes > required:
            return e
    return None


# --- heuristic baselines -----------------------------------------------------


class BaselineMonitor:
    """Streaming state machine for one heuristic criterion."""

    def __init__(self, config: BaselineConfig):
        self.config = config
        self._values: list[float] = []
        self._best = -np.inf
        self._best_epoch = 0
        self._run = 0

    def update(self, value: float) -> Optional[StopDecision]:
        """Record one epoch; None until the variant's minimum length is seen."""
        cfg = self.config
        v = self._values
        value = float(value)
        e = len(v)
        v.append(value)

        if cfg.variant == "performance":
            if value > self._best:
                self._best = value
                self._best_epoch = e
            since = e - self._best_epoch
            fired = since >= cfg.K
            detail = {"epochs_since_new_max": since}
        elif cfg.variant == "patience":
            if e >= 1 and value < v[e - 1]:
                self._run += 1
            else:
                self._run = 0
            fired = self._run >= cfg.patience
            detail = {"decrease_run": self._run}
        elif cfg.variant == "min_diff":
            if e >= 1:
                if value - self._best < cfg.min_delta:
                    self._run += 1
                else:
                    self._run = 0
            self._best = max(self._best, value)
            fired = e >= 1 and self._run >= cfg.patience
            detail = {"non_improving_run": self._run}
        else:  # avg_diff
            if e < cfg.window:
                return None
            avg = (value - v[e - cfg.window]) / cfg.window
            fired = avg < cfg.min_delta
            detail = {"window_average": avg}

        if len(v) < cfg.min_length:
            return None
        return StopDecision(
            stop=fired,
            votes=1 if fired else 0,
            required=0.0,
            diagnostics=detail,
        )

    def reset(self) -> None:
        self.__init__(self.config)


def baseline_evaluate(series: MetricSeries, config: BaselineConfig) -> StopDecision:
    """Evaluate a heuristic criterion at the last epoch of the curve."""
    if len(series) < config.min_length:
        raise InsufficientData(
            f"{config.variant} needs at least {config.min_length} epochs, got {len(series)}"
        )
    monitor = BaselineMonitor(config)
    decision = None
    for value in series:
        decision = monitor.update(value)
    assert decision is not None
    return decision


# --- drivers -----------------------------------------------------------------


def make_monitor(criterion: CriterionConfig):
    """Streaming monitor for either criterion kind."""
    if isinstance(criterion, AswsConfig):
        return AswsMonitor(criterion)
    if isinstance(criterion, BaselineConfig):
        return BaselineMonitor(criterion)
    raise TypeError(f"unsupported criterion type {type(criterion).__name__}")


def stopping_epoch(series: MetricSeries, criterion: CriterionConfig) -> Optional[int]:
    """First epoch index at which the criterion fires; None if it never does.

    The criterion is evaluated on every prefix of the curve, exactly as a
    live monitor would have seen it. Prefixes too short to evaluate count
    as non-fires.
    """
    monitor = make_monitor(criterion)
    for epoch, value in enumerate(series):
        decision = monitor.update(value)
        if decision is not None and decision.stop:
            return epoch
    return None


def best_accuracy_before(series: MetricSeries, epoch: int) -> float:
    """Highest value among the first `epoch` epochs (indices 0..epoch-1)."""
    if not 1 <= epoch <= len(series):
        raise InvalidEpoch(f"epoch must lie in [1, {len(series)}], got {epoch}")
    return float(np.max(series.values[:epoch]))
