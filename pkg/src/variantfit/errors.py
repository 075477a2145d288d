"""Exception hierarchy shared across the package."""


class VariantFitError(Exception):
    """Base class for all errors raised by this package."""


class EmptySeries(VariantFitError):
    """Fewer than two observation records."""


class CountViolation(VariantFitError):
    """Counts violate 0 <= variant_count <= sequenced <= total_cases."""


class DuplicatePeriod(VariantFitError):
    """Repeated t_index within one series."""


class UnknownDataset(VariantFitError):
    """Requested bundled dataset does not exist."""


class ParseError(VariantFitError):
    """Malformed CSV input; message carries the row number."""


class BoundaryOdds(VariantFitError):
    """Log-odds requested for a proportion of exactly 0 or 1."""


class NonPositivePeriod(VariantFitError):
    """Period length must be strictly positive."""


class Separation(VariantFitError):
    """All counts are 0 or all equal the totals; the MLE diverges."""


class Singular(VariantFitError):
    """Fewer than two informative periods; parameters not identified."""


class MaxIterations(VariantFitError):
    """Optimizer hit the iteration cap without converging."""


class BandwidthTooLarge(VariantFitError):
    """HAC bandwidth K must be smaller than the number of periods."""


class PeriodMismatch(VariantFitError):
    """Advantage estimates measured over different period lengths."""


class InvalidIndex(VariantFitError):
    """Variant index out of range or repeated."""


class InvalidConfig(VariantFitError):
    """Simulation configuration violates its invariants."""


class NonPositiveR(VariantFitError):
    """Reproduction number inputs must be strictly positive."""


class NonPositiveCount(VariantFitError):
    """Case / test counts must be strictly positive here."""


class NegativeC(VariantFitError):
    """Band half-width multiplier c must be non-negative."""


class WindowOutOfRange(VariantFitError):
    """Training window does not lie within the data."""
