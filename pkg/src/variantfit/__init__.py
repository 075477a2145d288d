"""Growth-advantage estimation for emerging virus variants."""

from .data import (
    ObservationRecord,
    SurveillanceSeries,
    load_csv,
    to_csv_string,
    validate_series,
    write_csv,
)
from .datasets import BUNDLED_NAMES, load_bundled
from .dynamics import (
    GENERATION_DAYS,
    Advantage,
    ModelParams,
    Proportion,
    from_log_odds,
    lambda_at,
    log_odds,
    odds,
    rescale_advantage,
    step_lambda,
)
from .estimate import FitResult, fit, hessian, log_likelihood, score
from .inference import (
    AdvantageEstimate,
    VarianceEstimate,
    compose_advantages,
    fisher_information,
    hac_sandwich,
    interval_for_gamma,
    parzen_kernel,
)
from .crude import CrudeMeasure, crude_gammas, mean_crude_gamma, proportion_intervals
from .forecast import ForecastBand, forecast
from .repro import ReproInference, adjusted_R, infer_variant_R, stability_region
from .multivariant import (
    MultiParams,
    MultiSeries,
    fit_multi,
    load_multi_csv,
    marginalize,
    step_lambda_multi,
)
from .simulate import RecoveryReport, SimConfig, recovery_report, simulate

__version__ = "0.1.0"

__all__ = [
    "Advantage",
    "AdvantageEstimate",
    "BUNDLED_NAMES",
    "CrudeMeasure",
    "FitResult",
    "ForecastBand",
    "GENERATION_DAYS",
    "ModelParams",
    "MultiParams",
    "MultiSeries",
    "ObservationRecord",
    "Proportion",
    "RecoveryReport",
    "ReproInference",
    "SimConfig",
    "SurveillanceSeries",
    "VarianceEstimate",
    "adjusted_R",
    "compose_advantages",
    "crude_gammas",
    "fisher_information",
    "fit",
    "fit_multi",
    "forecast",
    "from_log_odds",
    "hac_sandwich",
    "hessian",
    "infer_variant_R",
    "interval_for_gamma",
    "lambda_at",
    "load_bundled",
    "load_csv",
    "load_multi_csv",
    "log_likelihood",
    "log_odds",
    "marginalize",
    "mean_crude_gamma",
    "odds",
    "parzen_kernel",
    "proportion_intervals",
    "recovery_report",
    "rescale_advantage",
    "score",
    "simulate",
    "stability_region",
    "step_lambda",
    "step_lambda_multi",
    "to_csv_string",
    "validate_series",
    "write_csv",
]
