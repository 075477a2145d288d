"""Competition among m variants: simplex dynamics and multinomial fit.

Variant 1 is the numeraire (advantage fixed at 1). Proportions follow

    lam[j, t+1] = g[j] * lam[j, t] / sum_k g[k] * lam[k, t]

whose closed form is a multinomial-logistic curve with linear predictors
a_j + b_j * t (a_1 = b_1 = 0, b_j = log g_j). The m = 2 case collapses
to the binomial model exactly.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .data import ObservationRecord, SurveillanceSeries, validate_series
from .errors import (
    DuplicatePeriod,
    EmptySeries,
    InvalidIndex,
    MaxIterations,
    ParseError,
    Separation,
    Singular,
)
from .inference import VarianceEstimate, kernel_weighted_outer


@dataclass(frozen=True)
class MultiSeries:
    """Per-period counts for m variants; column j is variant j+1."""

    t_values: tuple[int, ...]
    labels: tuple[str, ...]
    counts: np.ndarray  # shape (T, m), non-negative integers
    variant_names: tuple[str, ...]
    period_days: float = 7.0

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.ndim != 2 or counts.shape[0] != len(self.t_values):
            raise ValueError("counts must be (T, m) with one row per period")
        if counts.shape[1] != len(self.variant_names):
            raise ValueError("one variant name per column required")
        if counts.shape[1] < 2:
            raise ValueError("need at least 2 variants")
        if np.any(counts < 0):
            raise ValueError("counts must be non-negative")
        if len(self.t_values) < 2:
            raise EmptySeries("need at least 2 periods")
        for a, b in zip(self.t_values, self.t_values[1:]):
            if a == b:
                raise DuplicatePeriod(f"repeated t_index {a}")
            if a > b:
                raise ValueError("periods not sorted by t_index")

    @property
    def n_variants(self) -> int:
        return self.counts.shape[1]

    @property
    def totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)


@dataclass(frozen=True)
class MultiParams:
    """Relative log-odds intercepts and log advantages for variants 2..m."""

    alphas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        if len(self.alphas) != len(self.betas):
            raise ValueError("alphas and betas must have equal length")

    @property
    def gammas(self) -> tuple[float, ...]:
        return tuple(math.exp(b) for b in self.betas)


def step_lambda_multi(
    lambdas: Sequence[float], gammas: Sequence[float]
) -> np.ndarray:
    """Advance simplex proportions one period; gammas exclude the numeraire."""
    lam = np.asarray(lambdas, dtype=float)
    g = np.concatenate([[1.0], np.asarray(gammas, dtype=float)])
    if len(g) != len(lam):
        raise ValueError("need one gamma per non-numeraire variant")
    if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-9:
        raise ValueError("lambdas must be a probability simplex vector")
    weighted = g * lam
    return weighted / weighted.sum()


def _proportions(params: MultiParams, t: np.ndarray) -> np.ndarray:
    # Rows: periods; columns: variants (column 0 is the numeraire).
    eta = np.zeros((len(t), 1 + len(params.alphas)))
    for j, (a, b) in enumerate(zip(params.alphas, params.betas), start=1):
        eta[:, j] = a + b * t
    eta -= eta.max(axis=1, keepdims=True)
    w = np.exp(eta)
    return w / w.sum(axis=1, keepdims=True)


def multi_log_likelihood(series: MultiSeries, params: MultiParams) -> float:
    t = np.asarray(series.t_values, dtype=float)
    lam = _proportions(params, t)
    with np.errstate(divide="ignore"):
        logl = np.where(series.counts > 0, series.counts * np.log(lam), 0.0)
    return float(logl.sum())


def multi_score_per_period(series: MultiSeries, params: MultiParams) -> np.ndarray:
    """Per-period gradients; columns ordered (a_2, b_2, a_3, b_3, ...)."""
    t = np.asarray(series.t_values, dtype=float)
    lam = _proportions(params, t)
    n = series.totals.astype(float)
    m = series.n_variants
    out = np.zeros((len(t), 2 * (m - 1)))
    for j in range(1, m):
        resid = series.counts[:, j] - n * lam[:, j]
        out[:, 2 * (j - 1)] = resid
        out[:, 2 * (j - 1) + 1] = resid * t
    return out


def multi_hessian(series: MultiSeries, params: MultiParams) -> np.ndarray:
    t = np.asarray(series.t_values, dtype=float)
    lam = _proportions(params, t)
    n = series.totals.astype(float)
    m = series.n_variants
    dim = 2 * (m - 1)
    h = np.zeros((dim, dim))
    for idx in range(len(t)):
        tt = np.array([[1.0, t[idx]], [t[idx], t[idx] ** 2]])
        p = lam[idx, 1:]
        w = -n[idx] * (np.diag(p) - np.outer(p, p))
        h += np.kron(w, tt)
    return h


def _initial_multi(series: MultiSeries) -> MultiParams:
    t = np.asarray(series.t_values, dtype=float)
    design = np.column_stack([np.ones(len(t)), t])
    ref = series.counts[:, 0].astype(float)
    alphas, betas = [], []
    for j in range(1, series.n_variants):
        y = np.log((series.counts[:, j] + 0.5) / (ref + 0.5))
        (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
        alphas.append(float(a))
        betas.append(float(b))
    return MultiParams(alphas=tuple(alphas), betas=tuple(betas))


def fit_multi(
    series: MultiSeries,
    tolerance: float = 1e-8,
    max_iterations: int = 200,
    bandwidth: Optional[int] = None,
    initial: Optional[MultiParams] = None,
) -> tuple[MultiParams, VarianceEstimate]:
    """Damped Newton fit; variance is Fisher or, given a bandwidth, HAC sandwich."""
    totals = series.totals
    if np.count_nonzero(totals > 0) < 2:
        raise Singular("need at least 2 periods with positive counts")
    for j in range(series.n_variants):
        col = series.counts[:, j]
        if col.sum() == 0 or np.all(col == totals):
            raise Separation(f"variant {j + 1} observed never or always; MLE diverges")

    params = initial if initial is not None else _initial_multi(series)
    theta = np.array(
        [v for pair in zip(params.alphas, params.betas) for v in pair], dtype=float
    )

    def unpack(vec: np.ndarray) -> MultiParams:
        return MultiParams(alphas=tuple(vec[0::2]), betas=tuple(vec[1::2]))

    ll = multi_log_likelihood(series, unpack(theta))
    converged = False
    for _ in range(max_iterations):
        g = multi_score_per_period(series, unpack(theta)).sum(axis=0)
        h = multi_hessian(series, unpack(theta))
        try:
            step = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError:
            raise Singular("singular Hessian during Newton iteration") from None
        slack = 1e-12 * (1.0 + abs(ll))
        scale = 1.0
        while scale > 1e-12:
            if multi_log_likelihood(series, unpack(theta + scale * step)) >= ll - slack:
                break
            scale *= 0.5
        theta = theta + scale * step
        ll = multi_log_likelihood(series, unpack(theta))
        g = multi_score_per_period(series, unpack(theta)).sum(axis=0)
        if np.max(np.abs(g)) <= tolerance:
            converged = True
            break
    if not converged:
        raise MaxIterations(f"no convergence in {max_iterations} iterations")

    params = unpack(theta)
    info = -multi_hessian(series, params)
    info_inv = np.linalg.inv(info)
    if bandwidth is None:
        cov = info_inv
        kind = "fisher"
    else:
        scores = multi_score_per_period(series, params)
        j_k = kernel_weighted_outer(
            np.asarray(series.t_values, dtype=float), scores, bandwidth
        )
        cov = info_inv @ j_k @ info_inv
        kind = f"sandwich({bandwidth})"
    cov = 0.5 * (cov + cov.T)
    variance = VarianceEstimate(kind=kind, matrix=cov, fit=None)
    return params, variance


def marginalize(series: MultiSeries, keep: tuple[int, int]) -> SurveillanceSeries:
    """Reduce to the two-variant series for 1-based variant indices (a, b).

    Variant b plays the emerging role: X_t = counts of b,
    N_t = counts of a + counts of b.
    """
    a, b = keep
    m = series.n_variants
    if a == b or not (1 <= a <= m) or not (1 <= b <= m):
        raise InvalidIndex(f"keep indices must be distinct and in 1..{m}, got {keep}")
    records = [
        ObservationRecord(
            t_index=t,
            label=label,
            sequenced=int(series.counts[i, a - 1] + series.counts[i, b - 1]),
            variant_count=int(series.counts[i, b - 1]),
        )
        for i, (t, label) in enumerate(zip(series.t_values, series.labels))
    ]
    return validate_series(records, period_days=series.period_days)


def read_multi_csv(fh, period_days: float = 7.0) -> MultiSeries:
    """Schema: `t,label,count_<name1>,count_<name2>,...` with a header."""
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file, expected a header row") from None
    header = [h.strip() for h in header]
    if len(header) < 4 or header[0] != "t" or header[1] != "label":
        raise ParseError(f"bad header {header!r}; expected t,label,count_*,...")
    names = []
    for col in header[2:]:
        if not col.startswith("count_"):
            raise ParseError(f"bad count column {col!r}; expected count_<variant>")
        names.append(col[len("count_"):])
    t_values, labels, rows = [], [], []
    for row_num, row in enumerate(reader, start=2):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"row {row_num}: expected {len(header)} fields, got {len(row)}")
        try:
            t_values.append(int(row[0]))
            rows.append([int(cell) for cell in row[2:]])
        except ValueError:
            raise ParseError(f"row {row_num}: malformed integer") from None
        labels.append(row[1].strip())
    order = np.argsort(t_values, kind="stable")
    return MultiSeries(
        t_values=tuple(t_values[i] for i in order),
        labels=tuple(labels[i] for i in order),
        counts=np.array(rows, dtype=int)[order],
        variant_names=tuple(names),
        period_days=period_days,
    )


def load_multi_csv(path: str, period_days: float = 7.0) -> MultiSeries:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return read_multi_csv(fh, period_days=period_days)


def write_multi_csv(series: MultiSeries, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t", "label"] + [f"count_{n}" for n in series.variant_names])
    for i, (t, label) in enumerate(zip(series.t_values, series.labels)):
        writer.writerow([t, label] + [int(c) for c in series.counts[i]])


def to_multi_csv_string(series: MultiSeries) -> str:
    buf = io.StringIO()
    write_multi_csv(series, buf)
    return buf.getvalue()
