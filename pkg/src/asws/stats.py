"""Hypothesis tests implemented from scratch on top of :mod:`asws.special`.

The normality test follows Royston's AS R94 algorithm (Applied Statistics
44, 1995): polynomial approximations to the expected normal order-statistic
weights give the W statistic, and a normalizing transform maps W to an
approximately standard-normal z whose upper tail is the p-value. Valid for
sample sizes 3 through 5000.

The one-sample t-test computes the two-sided tail probability of Student's
t through the regularized incomplete beta function.
"""

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateSample, InvalidDegreesOfFreedom, InvalidSampleSize
from .special import incbet, ndtr, ndtri, polevl


class TestResult(NamedTuple):
    """Statistic and p-value pair returned by the hypothesis tests."""

    statistic: float
    p_value: float


_SW_MAX_N = 5000

# AS R94 polynomial tables (ascending-power order as published)
_SW_C1 = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056]
_SW_C2 = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633]
_SW_C3 = [0.544, -0.39978, 0.025054, -6.714e-4]
_SW_C4 = [1.3822, -0.77857, 0.062767, -0.0020322]
_SW_C5 = [-1.5861, -0.31082, -0.083751, 0.0038915]
_SW_C6 = [-0.4803, -0.082676, 0.0030302]
_SW_G = [-2.273, 0.459]

_sw_weight_cache: dict[int, np.ndarray] = {}


def _poly_asc(coef, x):
    # ascending-order companion to polevl
    return polevl(x, list(reversed(coef)))


def _sw_weights(n: int) -> np.ndarray:
    """Antisymmetric AS R94 weight vector for a sample of size n."""
    cached = _sw_weight_cache.get(n)
    if cached is not None:
        return cached

    a = np.zeros(n)
    n2 = n // 2
    if n == 3:
        a1 = math.sqrt(0.5)
        lower = [-a1]
    else:
        an25 = n + 0.25
        m = np.array([ndtri((i - 0.375) / an25) for i in range(1, n2 + 1)])
        summ2 = 2.0 * float(np.sum(m * m))
        ssumm2 = math.sqrt(summ2)
        rsn = 1.0 / math.sqrt(n)
        a1 = _poly_asc(_SW_C1, rsn) - m[0] / ssumm2
        if n > 5:
            a2 = -m[1] / ssumm2 + _poly_asc(_SW_C2, rsn)
            fac = math.sqrt(
                (summ2 - 2.0 * m[0] ** 2 - 2.0 * m[1] ** 2)
                / (1.0 - 2.0 * a1**2 - 2.0 * a2**2)
            )
            lower = [-a1, -a2] + list(m[2:] / fac)
        else:
            fac = math.sqrt((summ2 - 2.0 * m[0] ** 2) / (1.0 - 2.0 * a1**2))
            lower = [-a1] + list(m[1:] / fac)

    a[:n2] = lower
    a[n - n2 :] = -np.asarray(lower)[::-1]
    a.flags.writeable = False
    _sw_weight_cache[n] = a
    return a


def shapiro_wilk(sample: Sequence[float]) -> TestResult:
    """Shapiro-Wilk test of the hypothesis that `sample` is normal.

    Returns the W statistic and its p-value. Small p-values reject
    normality; W lies in (0, 1] with 1 meaning a perfect fit to the
    expected normal order statistics.

    Raises InvalidSampleSize outside 3 <= n <= 5000 and DegenerateSample
    when every value is identical.
    """
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    if n < 3 or n > _SW_MAX_N:
        raise InvalidSampleSize(f"shapiro_wilk requires 3 <= n <= {_SW_MAX_N}, got {n}")
    if x[-1] - x[0] == 0.0:
        raise DegenerateSample("shapiro_wilk requires nonzero sample variance")

    a = _sw_weights(n)
    xm = x - x.mean()
    ssx = float(np.dot(xm, xm))
    sax = float(np.dot(a, xm))
    ssa = float(np.dot(a, a))

    ssassx = math.sqrt(ssa * ssx)
    w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx)
    w = 1.0 - w1

    if n == 3:
        # exact for n = 3: W has an arcsine null distribution
        pi6 = 6.0 / math.pi
        stqr = math.pi / 3.0
        p = pi6 * (math.asin(math.sqrt(min(max(w, 0.75), 1.0))) - stqr)
        return TestResult(w, min(max(p, 0.0), 1.0))

    y = math.log(max(1.0 - w, 5e-324))
    if n <= 11:
        gamma = _poly_asc(_SW_G, float(n))
        if y >= gamma:
            return TestResult(w, 1e-19)
        y = -math.log(gamma - y)
        mu = _poly_asc(_SW_C3, float(n))
        sigma = math.exp(_poly_asc(_SW_C4, float(n)))
    else:
        ln_n = math.log(n)
        mu = _poly_asc(_SW_C5, ln_n)
        sigma = math.exp(_poly_asc(_SW_C6, ln_n))
    p = 1.0 - ndtr((y - mu) / sigma)
    return TestResult(w, min(max(p, 0.0), 1.0))


def t_test_one_sample(sample: Sequence[float], center: float) -> TestResult:
    """Two-sided one-sample t-test of mean == center.

    Uses the unbiased sample standard deviation; the p-value is the
    two-sided tail of Student's t with n - 1 degrees of freedom.
    """
    x = np.asarray(sample, dtype=float)
    n = x.size
    if n < 2:
        raise InvalidSampleSize(f"t_test_one_sample requires n >= 2, got {n}")
    mean = float(x.mean())
    var = float(np.dot(x - mean, x - mean)) / (n - 1)
    if var == 0.0:
        raise DegenerateSample("t_test_one_sample requires nonzero sample variance")
    t = (mean - center) / math.sqrt(var / n)
    return TestResult(t, student_t_tail(t, n - 1))


def student_t_tail(t: float, df: int) -> float:
    """P(|T| >= |t|) for T distributed Student-t with df degrees of freedom."""
    if df < 1:
        raise InvalidDegreesOfFreedom(f"student_t_tail requires df >= 1, got {df}")
    if not math.isfinite(t):
        raise ValueError("student_t_tail requires finite t")
    if t == 0.0:
        return 1.0
    return incbet(0.5 * df, 0.5, df / (df + t * t))
