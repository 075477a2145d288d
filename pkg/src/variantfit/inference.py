"""Fisher and HAC sandwich covariance matrices and advantage intervals.

Variance estimators at the fitted optimum:

    fisher:      inv(I),            I = -sum_t h_t
    sandwich(K): inv(I) J_K inv(I), J_K = J + sum_j k(j/K) * (lagged score
                 cross products), J = sum_t s_t s_t'

with the Parzen kernel k. K = 0 gives the plain heteroskedasticity-only
sandwich. Lags are counted in t_index units, so series with gaps weight
each pair by its actual time separation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .data import SurveillanceSeries
from .dynamics import Advantage
from .errors import BandwidthTooLarge, PeriodMismatch, Singular
from .estimate import FitResult, hessian, per_period_scores

DEFAULT_BANDWIDTH = 4
DEFAULT_LEVEL = 0.95


@dataclass(frozen=True)
class VarianceEstimate:
    """Covariance of the (alpha, beta) estimates, tagged with its estimator."""

    kind: str  # "fisher" or "sandwich(K)"
    matrix: np.ndarray
    fit: FitResult | None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape[0] != m.shape[1]:
            raise ValueError("covariance matrix must be square")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("covariance matrix must be symmetric")

    @property
    def sigma_beta(self) -> float:
        """Standard error of the per-period log advantage."""
        return math.sqrt(max(self.matrix[1, 1], 0.0))


@dataclass(frozen=True)
class AdvantageEstimate:
    """Point estimate of the advantage with a confidence interval."""

    gamma: Advantage
    ci_low: float
    ci_high: float
    level: float

    def __post_init__(self):
        if not 0 < self.level < 1:
            raise ValueError(f"level must lie in (0,1), got {self.level}")
        if not self.ci_low <= self.gamma.value <= self.ci_high:
            raise ValueError("interval must contain the point estimate")


def parzen_kernel(x: float) -> float:
    """Compactly supported piecewise-cubic HAC weight; k(0)=1, k(x)=0 for |x|>=1."""
    ax = abs(x)
    if ax <= 0.5:
        return 1.0 - 6.0 * ax**2 + 6.0 * ax**3
    if ax <= 1.0:
        return 2.0 * (1.0 - ax) ** 3
    return 0.0


def _information(series: SurveillanceSeries, fit: FitResult) -> np.ndarray:
    return -hessian(series, fit.params)


def _invert(info: np.ndarray) -> np.ndarray:
    if abs(np.linalg.det(info)) < 1e-300 or np.linalg.cond(info) > 1e14:
        raise Singular("information matrix is singular")
    return np.linalg.inv(info)


def fisher_information(series: SurveillanceSeries, fit: FitResult) -> VarianceEstimate:
    """Model-based variance, inverse of the observed information."""
    cov = _invert(_information(series, fit))
    return VarianceEstimate(kind="fisher", matrix=cov, fit=fit)


def kernel_weighted_outer(
    t_values: np.ndarray, scores: np.ndarray, bandwidth: int
) -> np.ndarray:
    """Parzen-weighted sum of score outer products across all lag pairs.

    `scores` has one row per period; lags are t_index differences. The
    kernel argument is lag / (bandwidth + 1), so lags 1..bandwidth carry
    weight and bandwidth 0 reduces to the plain sum of outer products.
    """
    j = scores.T @ scores
    if bandwidth == 0:
        return j
    n = len(t_values)
    for a in range(n):
        for b in range(a + 1, n):
            lag = t_values[b] - t_values[a]
            w = parzen_kernel(lag / (bandwidth + 1))
            if w == 0.0:
                continue
            cross = np.outer(scores[a], scores[b])
            j = j + w * (cross + cross.T)
    return j


def hac_sandwich(
    series: SurveillanceSeries, fit: FitResult, bandwidth: int = DEFAULT_BANDWIDTH
) -> VarianceEstimate:
    """Autocorrelation-robust sandwich variance with the given Parzen bandwidth."""
    if bandwidth < 0:
        raise ValueError(f"bandwidth must be >= 0, got {bandwidth}")
    if bandwidth >= len(series):
        raise BandwidthTooLarge(
            f"bandwidth {bandwidth} must be smaller than the series length {len(series)}"
        )
    info_inv = _invert(_information(series, fit))
    scores = per_period_scores(series, fit.params)
    t_values = np.array(series.t_values, dtype=float)
    j_k = kernel_weighted_outer(t_values, scores, bandwidth)
    cov = info_inv @ j_k @ info_inv
    cov = 0.5 * (cov + cov.T)
    return VarianceEstimate(kind=f"sandwich({bandwidth})", matrix=cov, fit=fit)


def normal_quantile(level: float) -> float:
    """Two-sided z value; pinned to the conventional 1.96 at the 95% level."""
    if abs(level - 0.95) < 1e-12:
        return 1.96
    return float(norm.ppf(0.5 + level / 2.0))


def interval_for_gamma(
    variance: VarianceEstimate,
    fit: FitResult,
    target_days: float | None = None,
    level: float = DEFAULT_LEVEL,
) -> AdvantageEstimate:
    """Confidence interval for the advantage rescaled to `target_days`.

    Endpoints are exp((target_days / period_days) * (beta_hat +- z * se)).
    """
    period_days = fit.series.period_days
    if target_days is None:
        target_days = period_days
    z = normal_quantile(level)
    scale = target_days / period_days
    beta = fit.params.beta
    se = variance.sigma_beta
    return AdvantageEstimate(
        gamma=Advantage(value=math.exp(scale * beta), period_days=target_days),
        ci_low=math.exp(scale * (beta - z * se)),
        ci_high=math.exp(scale * (beta + z * se)),
        level=level,
    )


def compose_advantages(a: AdvantageEstimate, b: AdvantageEstimate) -> AdvantageEstimate:
    """Chain two advantages measured against intermediate references.

    Point estimates multiply; interval endpoints multiply too
    (endpoint-product rule, treating the two estimates as independent).
    """
    if not math.isclose(a.gamma.period_days, b.gamma.period_days):
        raise PeriodMismatch(
            f"period mismatch: {a.gamma.period_days} vs {b.gamma.period_days}"
        )
    if not math.isclose(a.level, b.level):
        raise ValueError("confidence levels differ")
    return AdvantageEstimate(
        gamma=Advantage(
            value=a.gamma.value * b.gamma.value, period_days=a.gamma.period_days
        ),
        ci_low=a.ci_low * b.ci_low,
        ci_high=a.ci_high * b.ci_high,
        level=a.level,
    )
