"""Learning-rate schedules driven by the stopping test, plus comparators.

The adaptive schedule drops the learning rate by a factor of 10 whenever
the stopping test says learning has stalled, then holds evaluation off for
`forced_epochs` so learning can restart at the new rate. Evaluation only
ever sees the curve suffix recorded since the last drop: accuracy
statistics from the previous rate regime describe a different optimizer
trajectory and would poison the windows.

Comparator schedules mirror the usual step / reduce-on-plateau /
triangular2-cyclic rules.
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional

from .curve import MetricSeries
from .errors import InsufficientData, InvalidConfig
from .stopping import AswsConfig, AswsMonitor, StopDecision, asws_evaluate

logger = logging.getLogger(__name__)

LR_FLOOR = 1e-8
DROP_FACTOR = 0.1


@dataclass(frozen=True)
class SchedulerState:
    """State of the adaptive schedule between epochs."""

    initial_lr: float
    current_lr: float
    epochs_since_drop: int = 0
    drops_taken: int = 0
    forced_epochs: int = 5

    def __post_init__(self):
        if self.initial_lr <= 0 or self.current_lr <= 0:
            raise InvalidConfig("learning rates must be positive")
        if self.epochs_since_drop < 0 or self.drops_taken < 0 or self.forced_epochs < 0:
            raise InvalidConfig("scheduler counters must be non-negative")

    @classmethod
    def fresh(cls, initial_lr: float = 0.1, forced_epochs: int = 5) -> "SchedulerState":
        return cls(initial_lr=initial_lr, current_lr=initial_lr, forced_epochs=forced_epochs)


def asws_scheduler_step(
    state: SchedulerState, series: MetricSeries, config: AswsConfig
) -> tuple[float, SchedulerState]:
    """Advance the adaptive schedule by one epoch.

    `series` must contain every accuracy up to and including the epoch
    being stepped. Returns the learning rate to use next and the updated
    state. While epochs_since_drop < forced_epochs no evaluation happens;
    otherwise the stopping test runs on the suffix since the last drop,
    and a firing verdict divides the rate by 10 (never below the 1e-8
    floor, where further fires are ignored).
    """
    k = len(series)
    if k < 1:
        raise InsufficientData("scheduler step requires at least one recorded epoch")
    if state.epochs_since_drop >= state.forced_epochs:
        start = max(0, k - (state.epochs_since_drop + 1))
        suffix = series[start:]
        decision: Optional[StopDecision] = None
        if len(suffix) > config.n:
            decision = asws_evaluate(suffix, config)
        if decision is not None and decision.stop:
            new_lr = state.current_lr * DROP_FACTOR
            if new_lr >= LR_FLOOR:
                new_state = replace(
                    state,
                    current_lr=new_lr,
                    epochs_since_drop=0,
                    drops_taken=state.drops_taken + 1,
                )
                return new_lr, new_state
            logger.info("stopping test fired below the LR floor; drop ignored")
    return state.current_lr, replace(state, epochs_since_drop=state.epochs_since_drop + 1)


class AswsLrScheduler:
    """Streaming form of the adaptive schedule.

    Feeds one accuracy per epoch; the internal monitor restarts after every
    drop so windows never straddle a rate change. Produces exactly the drop
    sequence of repeated asws_scheduler_step calls on the growing curve.
    """

    def __init__(self, config: AswsConfig, initial_lr: float = 0.1, forced_epochs: int = 5):
        self.config = config
        self.state = SchedulerState.fresh(initial_lr, forced_epochs)
        self._monitor = AswsMonitor(config)
        self.last_decision: Optional[StopDecision] = None
        self.last_drop = False

    @property
    def current_lr(self) -> float:
        return self.state.current_lr

    def step(self, accuracy: float) -> float:
        """Record one epoch's accuracy, return the learning rate to use next."""
        decision = self._monitor.update(accuracy)
        self.last_decision = decision
        self.last_drop = False
        state = self.state
        if state.epochs_since_drop >= state.forced_epochs and decision is not None and decision.stop:
            new_lr = state.current_lr * DROP_FACTOR
            if new_lr >= LR_FLOOR:
                self.state = replace(
                    state,
                    current_lr=new_lr,
                    epochs_since_drop=0,
                    drops_taken=state.drops_taken + 1,
                )
                self._monitor.reset()
                self.last_drop = True
                return self.state.current_lr
            logger.info("stopping test fired below the LR floor; drop ignored")
        self.state = replace(state, epochs_since_drop=state.epochs_since_drop + 1)
        return self.state.current_lr

    def reset(self) -> None:
        self.__init__(self.config, self.state.initial_lr, self.state.forced_epochs)


# --- comparator schedules -----------------------------------------------------

COMPARATOR_VARIANTS = ("step", "plateau", "cyclic")


@dataclass(frozen=True)
class ComparatorScheduleConfig:
    """Configuration for the step / plateau / cyclic comparator schedules."""

    variant: str
    gamma: float = 0.5
    step_size: int = 50
    patience: int = 20
    min_lr: float = 0.0
    max_lr: float = 0.0
    initial_lr: float = 0.25

    def __post_init__(self):
        if self.variant not in COMPARATOR_VARIANTS:
            raise InvalidConfig(f"unknown schedule variant {self.variant!r}")
        if self.variant == "step":
            if not 0.0 <= self.gamma <= 1.0:
                raise InvalidConfig("step schedule gamma must lie in [0, 1]")
            if self.step_size < 1 or self.initial_lr <= 0:
                raise InvalidConfig("step schedule needs step_size >= 1 and initial_lr > 0")
        elif self.variant == "plateau":
            if not 0.0 < self.gamma <= 1.0:
                raise InvalidConfig("plateau schedule gamma must lie in (0, 1]")
            if self.patience < 1 or self.initial_lr <= 0 or self.min_lr < 0:
                raise InvalidConfig("plateau schedule needs patience >= 1 and positive rates")
        else:
            if self.step_size < 1 or not 0.0 < self.min_lr <= self.max_lr:
                raise InvalidConfig("cyclic schedule needs step_size >= 1 and 0 < min_lr <= max_lr")


def step_schedule(gamma: float = 0.5, step_size: int = 50, initial_lr: float = 0.25) -> ComparatorScheduleConfig:
    return ComparatorScheduleConfig("step", gamma=gamma, step_size=step_size, initial_lr=initial_lr)


def plateau_schedule(
    gamma: float = 0.1, patience: int = 20, initial_lr: float = 0.25, min_lr: float = 0.0
) -> ComparatorScheduleConfig:
    return ComparatorScheduleConfig(
        "plateau", gamma=gamma, patience=patience, initial_lr=initial_lr, min_lr=min_lr
    )


def cyclic_schedule(
    min_lr: float = 0.01, max_lr: float = 0.026, step_size: int = 30000
) -> ComparatorScheduleConfig:
    return ComparatorScheduleConfig("cyclic", min_lr=min_lr, max_lr=max_lr, step_size=step_size)


def comparator_lr(
    config: ComparatorScheduleConfig,
    epoch_or_iter: int,
    series: Optional[MetricSeries] = None,
) -> float:
    """Learning rate of a comparator schedule at a given epoch or iteration.

    step: initial_lr * gamma ** floor(epoch / step_size).
    cyclic (triangular2): triangular wave between min_lr and max_lr with
    half-cycle step_size; the amplitude halves after every full cycle.
    plateau: replays the curve up to the given epoch, multiplying the rate
    by gamma whenever the running maximum fails to improve for `patience`
    consecutive epochs (`series` required).
    """
    if epoch_or_iter < 0:
        raise InvalidConfig("epoch_or_iter must be non-negative")
    if config.variant == "step":
        return config.initial_lr * config.gamma ** (epoch_or_iter // config.step_size)

    if config.variant == "cyclic":
        it = epoch_or_iter
        cycle = 1 + it // (2 * config.step_size)
        x = abs(it / config.step_size - 2 * cycle + 1)
        scale = 0.5 ** (cycle - 1)
        return config.min_lr + (config.max_lr - config.min_lr) * max(0.0, 1.0 - x) * scale

    # plateau
    if series is None:
        raise InvalidConfig("plateau schedule requires the accuracy series")
    if epoch_or_iter >= len(series):
        raise InvalidConfig("epoch_or_iter exceeds the recorded series")
    lr = config.initial_lr
    best = float("-inf")
    bad = 0
    for e in range(epoch_or_iter + 1):
        value = series[e]
        if value > best:
            best = value
            bad = 0
        else:
            bad += 1
            if bad >= config.patience:
                lr = max(lr * config.gamma, config.min_lr)
                bad = 0
    return lr
