"""Maximum likelihood estimation of the two-variant logistic model.

The log-likelihood (up to the binomial-coefficient constant) is

    ll(a, b) = sum_t X_t * log(lam_t) + (N_t - X_t) * log(1 - lam_t),
    lam_t = expit(a + b * t),

which is globally concave in (a, b). A damped Newton iteration with
analytic gradient and Hessian therefore converges from any start.

Sign convention: score() returns the gradient of the log-likelihood,
d ll / d(a, b) = sum_t (X_t - N_t * lam_t) * (1, t); this is checked
against central finite differences in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit, xlogy

from .data import SurveillanceSeries
from .dynamics import ModelParams
from .errors import MaxIterations, Separation, Singular

DEFAULT_TOLERANCE = 1e-8  # max-abs score at the optimum
DEFAULT_STEP_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 100


@dataclass(frozen=True)
class FitResult:
    params: ModelParams
    log_likelihood: float
    iterations: int
    converged: bool
    fitted: tuple[tuple[int, float], ...]  # (t_index, fitted lambda)
    score_norm: float
    series: SurveillanceSeries = field(repr=False)

    @property
    def gamma(self) -> float:
        """Estimated per-period advantage, exp(beta)."""
        return self.params.gamma


def _arrays(series: SurveillanceSeries):
    t = np.array([r.t_index for r in series.records], dtype=float)
    n = np.array([r.sequenced for r in series.records], dtype=float)
    x = np.array([r.variant_count for r in series.records], dtype=float)
    return t, n, x


def log_likelihood(series: SurveillanceSeries, params: ModelParams) -> float:
    t, n, x = _arrays(series)
    lam = expit(params.alpha + params.beta * t)
    return float(np.sum(xlogy(x, lam) + xlogy(n - x, 1.0 - lam)))


def score(series: SurveillanceSeries, params: ModelParams) -> np.ndarray:
    """Gradient of the log-likelihood with respect to (alpha, beta)."""
    t, n, x = _arrays(series)
    resid = x - n * expit(params.alpha + params.beta * t)
    return np.array([resid.sum(), (resid * t).sum()])


def per_period_scores(series: SurveillanceSeries, params: ModelParams) -> np.ndarray:
    """Per-record gradient contributions; rows are (t_index order) x (alpha, beta)."""
    t, n, x = _arrays(series)
    resid = x - n * expit(params.alpha + params.beta * t)
    return np.column_stack([resid, resid * t])


def hessian(series: SurveillanceSeries, params: ModelParams) -> np.ndarray:
    t, n, x = _arrays(series)
    lam = expit(params.alpha + params.beta * t)
    w = n * lam * (1.0 - lam)
    return -np.array([[w.sum(), (w * t).sum()], [(w * t).sum(), (w * t * t).sum()]])


def _initial_params(series: SurveillanceSeries) -> ModelParams:
    # Least squares on Haldane-Anscombe corrected empirical log-odds.
    t, n, x = _arrays(series)
    keep = n > 0
    y = np.log((x[keep] + 0.5) / (n[keep] - x[keep] + 0.5))
    design = np.column_stack([np.ones(keep.sum()), t[keep]])
    (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
    return ModelParams(alpha=float(a), beta=float(b))


def fit(
    series: SurveillanceSeries,
    tolerance: float = DEFAULT_TOLERANCE,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    initial: ModelParams | None = None,
) -> FitResult:
    """Damped Newton maximization; step-halves whenever the likelihood drops."""
    t, n, x = _arrays(series)
    informative = n > 0
    if len(np.unique(t[informative])) < 2:
        raise Singular("need at least 2 periods with positive sequenced counts")
    if np.all(x[informative] == 0) or np.all(x[informative] == n[informative]):
        raise Separation("all counts at a boundary; the MLE does not exist")

    params = initial if initial is not None else _initial_params(series)
    theta = np.array([params.alpha, params.beta])
    ll = log_likelihood(series, ModelParams(*theta))
    converged = False
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        g = score(series, ModelParams(*theta))
        h = hessian(series, ModelParams(*theta))
        try:
            step = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError:
            raise Singular("singular Hessian during Newton iteration") from None
        # Slack scales with |ll| so float-resolution noise never blocks a step.
        slack = 1e-12 * (1.0 + abs(ll))
        scale = 1.0
        while scale > 1e-12:
            candidate = theta + scale * step
            ll_new = log_likelihood(series, ModelParams(*candidate))
            if ll_new >= ll - slack:
                break
            scale *= 0.5
        theta = theta + scale * step
        ll = log_likelihood(series, ModelParams(*theta))
        g = score(series, ModelParams(*theta))
        if np.max(np.abs(g)) <= tolerance and np.max(np.abs(scale * step)) <= DEFAULT_STEP_TOLERANCE:
            converged = True
            break
        if np.max(np.abs(g)) <= tolerance and iterations > 1:
            converged = True
            break
    if not converged:
        raise MaxIterations(f"no convergence in {max_iterations} iterations")

    params = ModelParams(alpha=float(theta[0]), beta=float(theta[1]))
    lam_hat = expit(params.alpha + params.beta * t)
    fitted = tuple(
        (r.t_index, float(l)) for r, l in zip(series.records, lam_hat)
    )
    return FitResult(
        params=params,
        log_likelihood=float(ll),
        iterations=iterations,
        converged=True,
        fitted=fitted,
        score_norm=float(np.max(np.abs(score(series, params)))),
        series=series,
    )
