"""Statistical early stopping and learning-rate decisions for accuracy curves."""

from .curve import (
    MetricSeries,
    SmoothingConfig,
    clipped_exponential_smooth,
    finite_difference,
    windows,
)
from .errors import (
    AswsError,
    ConstraintInfeasible,
    DegenerateSample,
    InsufficientData,
    InvalidClip,
    InvalidConfig,
    InvalidDegreesOfFreedom,
    InvalidEpoch,
    InvalidSampleSize,
    NotFound,
    ParseError,
    ProtocolError,
    ValidationError,
)
from .stats import TestResult, shapiro_wilk, student_t_tail, t_test_one_sample
from .stopping import (
    AswsConfig,
    AswsMonitor,
    BaselineConfig,
    BaselineMonitor,
    StopDecision,
    WindowResult,
    asws_evaluate,
    avg_diff_stopping,
    baseline_evaluate,
    best_accuracy_before,
    make_monitor,
    min_diff_stopping,
    patience_stopping,
    performance_stopping,
    stopping_epoch,
)

__version__ = "0.1.0"

__all__ = [
    "MetricSeries",
    "SmoothingConfig",
    "clipped_exponential_smooth",
    "finite_difference",
    "windows",
    "TestResult",
    "shapiro_wilk",
    "t_test_one_sample",
    "student_t_tail",
    "AswsConfig",
    "AswsMonitor",
    "BaselineConfig",
    "BaselineMonitor",
    "StopDecision",
    "WindowResult",
    "asws_evaluate",
    "baseline_evaluate",
    "best_accuracy_before",
    "stopping_epoch",
    "make_monitor",
    "performance_stopping",
    "patience_stopping",
    "min_diff_stopping",
    "avg_diff_stopping",
    "AswsError",
    "ConstraintInfeasible",
    "DegenerateSample",
    "InsufficientData",
    "InvalidClip",
    "InvalidConfig",
    "InvalidDegreesOfFreedom",
    "InvalidEpoch",
    "InvalidSampleSize",
    "NotFound",
    "ParseError",
    "ProtocolError",
    "ValidationError",
    "__version__",
]
