"""Effective reproduction number of the emerging variant.

Generation counting: with aggregate reproduction number R, proportion lam
and per-generation advantage g, the previous generation's cases add up,
which gives R_B = R * (lam + g * (1 - lam)) and R_A = R_B / g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dynamics import GENERATION_DAYS, Advantage, Proportion
from .errors import NonPositiveCount, NonPositiveR
from .inference import AdvantageEstimate

TEST_INTENSITY_EXPONENT = 0.7  # surveillance-practice adjustment for testing volume


@dataclass(frozen=True)
class ReproInference:
    R_all: float
    lam: Proportion
    gamma_gen: Advantage
    R_variant: float

    @property
    def R_incumbent(self) -> float:
        return self.R_variant / self.gamma_gen.value


def infer_variant_R(
    R_all: float, lam: Proportion, gamma_gen: Advantage
) -> ReproInference:
    if R_all <= 0:
        raise NonPositiveR(f"aggregate R must be positive, got {R_all}")
    r_variant = R_all * (lam.value + gamma_gen.value * (1.0 - lam.value))
    return ReproInference(R_all=R_all, lam=lam, gamma_gen=gamma_gen, R_variant=r_variant)


def adjusted_R(
    cases_t: float,
    cases_prev: float,
    tested_t: float,
    tested_prev: float,
    gen_days: float = GENERATION_DAYS,
    period_days: float = 7.0,
    exponent: float = TEST_INTENSITY_EXPONENT,
) -> float:
    """Per-generation aggregate R from the test-intensity-adjusted case ratio.

    Cases are deflated by (tested/baseline)^exponent; the baseline cancels
    in the ratio, so only the two periods' counts are needed.
    """
    for name, v in [
        ("cases_t", cases_t),
        ("cases_prev", cases_prev),
        ("tested_t", tested_t),
        ("tested_prev", tested_prev),
    ]:
        if v <= 0:
            raise NonPositiveCount(f"{name} must be positive, got {v}")
    log_ratio = math.log(cases_t / cases_prev) - exponent * math.log(tested_t / tested_prev)
    return math.exp((gen_days / period_days) * log_ratio)


def stability_region(
    gamma: AdvantageEstimate, lambda_grid: Iterable[Proportion]
) -> list[tuple[float, float, float, float]]:
    """Threshold aggregate R at which the variant's R crosses 1, per lambda.

    Returns (lambda, threshold, lo, hi) rows; lo/hi use the CI endpoints of
    the advantage, and the band collapses to zero width as lambda -> 1.
    """

    def threshold(lam: float, g: float) -> float:
        return 1.0 / (lam + g * (1.0 - lam))

    rows = []
    for p in lambda_grid:
        lam = p.value
        values = sorted(
            threshold(lam, g) for g in (gamma.gamma.value, gamma.ci_low, gamma.ci_high)
        )
        rows.append((lam, threshold(lam, gamma.gamma.value), values[0], values[-1]))
    return rows


def stability_region_csv(rows: Sequence[tuple[float, float, float, float]]) -> str:
    lines = ["lambda,threshold,lo,hi"]
    for lam, thr, lo, hi in rows:
        lines.append(f"{lam:.10g},{thr:.10g},{lo:.10g},{hi:.10g}")
    return "\n".join(lines) + "\n"
