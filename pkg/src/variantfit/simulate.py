"""Synthetic surveillance series under the model's data-generating process.

Serves as the independent oracle for estimator-recovery and invariance
tests: proportions follow the deterministic recursion exactly and counts
are drawn binomially (multinomially for m > 2) with numpy's PCG64
generator, so identical (seed, replication) pairs give identical series.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .data import ObservationRecord, SurveillanceSeries, validate_series
from .errors import InvalidConfig
from .estimate import fit
from .inference import hac_sandwich, fisher_information, interval_for_gamma
from .multivariant import MultiSeries, step_lambda_multi


@dataclass(frozen=True)
class SimConfig:
    gammas: tuple[float, ...]  # per-period advantages of variants 2..m
    initial_proportions: tuple[float, ...]  # simplex of length m
    sequenced: tuple[int, ...]  # N_t schedule, length T
    seed: int = 0
    period_days: float = 7.0
    growth: Optional[tuple[float, ...]] = None  # numeraire growth a_t, length T
    base_cases: float = 10_000.0  # total cases at t=0 when growth is given

    def __post_init__(self):
        lam = np.asarray(self.initial_proportions, dtype=float)
        if len(lam) != len(self.gammas) + 1:
            raise InvalidConfig("need one initial proportion per variant")
        if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-9:
            raise InvalidConfig("initial proportions must form a simplex")
        if any(g <= 0 for g in self.gammas):
            raise InvalidConfig("advantages must be positive")
        if any(n < 0 for n in self.sequenced):
            raise InvalidConfig("sequenced counts must be non-negative")
        if len(self.sequenced) == 0:
            raise InvalidConfig("empty sequencing schedule")
        if self.growth is not None and len(self.growth) != len(self.sequenced):
            raise InvalidConfig("growth schedule must match the sequencing schedule")

    @property
    def n_variants(self) -> int:
        return len(self.gammas) + 1


def expected_path(config: SimConfig) -> np.ndarray:
    """Deterministic simplex path, rows t=1..T."""
    lam = np.asarray(config.initial_proportions, dtype=float)
    path = []
    for _ in config.sequenced:
        lam = step_lambda_multi(lam, config.gammas)
        path.append(lam)
    return np.array(path)


def simulate(
    config: SimConfig, replication: int = 0
) -> Union[SurveillanceSeries, MultiSeries]:
    """Draw one synthetic series; the RNG stream is keyed by (seed, replication)."""
    rng = np.random.default_rng([config.seed, replication])
    path = expected_path(config)
    T = len(config.sequenced)

    totals = None
    if config.growth is not None:
        cases = np.asarray(config.initial_proportions) * config.base_cases
        g = np.concatenate([[1.0], np.asarray(config.gammas)])
        totals = []
        for a in config.growth:
            cases = cases * g * a
            totals.append(int(round(cases.sum())))

    if config.n_variants == 2:
        records = []
        for i in range(T):
            n = config.sequenced[i]
            x = int(rng.binomial(n, path[i, 1])) if n > 0 else 0
            records.append(
                ObservationRecord(
                    t_index=i + 1,
                    label=f"t{i + 1}",
                    sequenced=n,
                    variant_count=x,
                    total_cases=None if totals is None else max(totals[i], n),
                )
            )
        return validate_series(records, period_days=config.period_days)

    counts = np.zeros((T, config.n_variants), dtype=int)
    for i in range(T):
        n = config.sequenced[i]
        if n > 0:
            counts[i] = rng.multinomial(n, path[i])
    return MultiSeries(
        t_values=tuple(range(1, T + 1)),
        labels=tuple(f"t{i}" for i in range(1, T + 1)),
        counts=counts,
        variant_names=tuple(f"variant_{j}" for j in range(1, config.n_variants + 1)),
        period_days=config.period_days,
    )


@dataclass(frozen=True)
class RecoveryReport:
    n_replications: int
    n_failed: int
    true_gamma: float
    mean_gamma: float
    bias: float
    coverage: float  # fraction of CIs containing the true advantage
    mean_ci_width: float


def recovery_report(
    config: SimConfig,
    n_replications: int,
    level: float = 0.95,
    bandwidth: Optional[int] = None,
) -> RecoveryReport:
    """Fit each replication and summarize bias, coverage, and CI width.

    Two-variant configs only. Fit failures (separation on extreme draws)
    are counted, not fatal. The default variance is Fisher; pass a
    bandwidth for HAC intervals.
    """
    if config.n_variants != 2:
        raise InvalidConfig("recovery_report handles two-variant configs only")
    if n_replications < 1:
        raise InvalidConfig("need at least one replication")
    true_gamma = config.gammas[0]
    gammas, covered, widths, failed = [], 0, [], 0
    for rep in range(n_replications):
        series = simulate(config, replication=rep)
        try:
            result = fit(series)
            variance = (
                fisher_information(series, result)
                if bandwidth is None
                else hac_sandwich(series, result, bandwidth)
            )
        except Exception:
            failed += 1
            continue
        est = interval_for_gamma(variance, result, config.period_days, level)
        gammas.append(est.gamma.value)
        widths.append(est.ci_high - est.ci_low)
        if est.ci_low <= true_gamma <= est.ci_high:
            covered += 1
    n_ok = len(gammas)
    if n_ok == 0:
        raise InvalidConfig("all replications failed to fit")
    return RecoveryReport(
        n_replications=n_replications,
        n_failed=failed,
        true_gamma=true_gamma,
        mean_gamma=float(np.mean(gammas)),
        bias=float(np.mean(gammas) - true_gamma),
        coverage=covered / n_ok,
        mean_ci_width=float(np.mean(widths)),
    )
