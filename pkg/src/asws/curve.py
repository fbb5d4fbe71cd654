"""Time-series primitives for accuracy curves.

A curve is an epoch-indexed sequence of finite reals. The operations here
are pure: finite differences, clipped exponential smoothing, and sliding
windows.
"""

from dataclasses import dataclass
from typing import Iterator, Sequence, overload

import numpy as np

from .errors import InsufficientData, InvalidClip, InvalidConfig, InvalidSampleSize


class MetricSeries:
    """An immutable, epoch-indexed sequence of finite real values."""

    __slots__ = ("_values",)

    def __init__(self, values: Sequence[float]):
        arr = np.asarray(values, dtype=float)
        if arr.ndim != 1:
            raise InvalidConfig("MetricSeries requires a one-dimensional sequence")
        if arr.size and not np.all(np.isfinite(arr)):
            raise InvalidConfig("MetricSeries values must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    def __len__(self) -> int:
        return self._values.size

    def __iter__(self) -> Iterator[float]:
        return (float(v) for v in self._values)

    @overload
    def __getitem__(self, index: int) -> float: ...

    @overload
    def __getitem__(self, index: slice) -> "MetricSeries": ...

    def __getitem__(self, index):
        if isinstance(index, slice):
            return MetricSeries(self._values[index])
        return float(self._values[index])

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricSeries):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def __repr__(self) -> str:
        return f"MetricSeries(length={len(self)})"


@dataclass(frozen=True)
class SmoothingConfig:
    """Exponential smoothing factor and clipping point.

    gamma = 0 is admitted and makes the smoother the identity.
    """

    gamma: float
    clip: int

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise InvalidConfig(f"smoothing gamma must lie in [0, 1), got {self.gamma}")
        if self.clip < 1:
            raise InvalidConfig(f"smoothing clip must be >= 1, got {self.clip}")


def finite_difference(series: MetricSeries) -> MetricSeries:
    """Per-epoch change of a curve, one value per input epoch.

    Interior epochs get the second-order central difference
    (v[i+1] - v[i-1]) / 2; both ends get the one-sided first difference.
    """
    if len(series) < 2:
        raise InsufficientData("finite_difference requires at least 2 epochs")
    return MetricSeries(np.gradient(series.values))


def geometric_weight_sums(gamma: float, clip: int) -> list[float]:
    """Normalizers w_m = 1 + gamma + ... + gamma^m for m = 0..clip."""
    ws = [1.0]
    w = 1.0
    for _ in range(clip):
        w = gamma * w + 1.0
        ws.append(w)
    return ws


def smooth_value_at(values, i: int, gamma: float, clip: int, norm: float) -> float:
    """Smoothed value at index i: geometric average of the trailing window.

    The window covers the most recent min(i, clip) + 1 raw values; `norm`
    must be the matching geometric weight sum. Shared by the batch smoother
    and the streaming monitor so both produce bit-identical values.
    """
    start = i - min(i, clip)
    acc = 0.0
    for j in range(start, i + 1):
        acc = gamma * acc + values[j]
    return acc / norm


def smooth_values(values: np.ndarray, gamma: float, clip: int) -> np.ndarray:
    """Clipped exponential smoothing over a raw float array (no validation)."""
    k = len(values)
    ws = geometric_weight_sums(gamma, min(clip, k - 1) if k else 0)
    out = np.empty(k)
    vals = values.tolist()
    for i in range(k):
        out[i] = smooth_value_at(vals, i, gamma, clip, ws[min(i, clip)])
    return out


def clipped_exponential_smooth(series: MetricSeries, config: SmoothingConfig) -> MetricSeries:
    """Exponentially smooth a curve up to the clipping point.

    Up to index c the output is the bias-corrected exponential moving
    average (geometric weights over the whole prefix); past c the geometric
    window is truncated to the most recent c + 1 values, with the fixed
    normalizer w_c, so constant series stay fixed points.
    """
    if len(series) == 0:
        return series
    if config.clip >= len(series):
        raise InvalidClip(
            f"clip point {config.clip} must be smaller than series length {len(series)}"
        )
    return MetricSeries(smooth_values(series.values, config.gamma, config.clip))


def windows(series: MetricSeries, n: int) -> list[MetricSeries]:
    """All contiguous length-n slices, oldest first.

    A series of length k yields k - n + 1 windows; window i covers epochs
    [i, i + n).
    """
    if n < 3:
        raise InvalidSampleSize(f"window sample size must be >= 3, got {n}")
    k = len(series)
    if n > k:
        raise InsufficientData(f"cannot slide windows of {n} over {k} epochs")
    return [series[i : i + n] for i in range(k - n + 1)]
