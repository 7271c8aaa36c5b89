"""Exception hierarchy shared by every estimator and the CLI."""


class MarketEffError(ValueError):
    """Base class for all errors raised by this package."""


class RejectedInputError(MarketEffError):
    """Input data violates a structural invariant (non-positive price, duplicate date, bad row)."""


class InsufficientDataError(MarketEffError):
    """Series too short for the requested estimator or scale grid."""


class DegenerateFitError(MarketEffError):
    """A scaling regression cannot be formed, e.g. a zero fluctuation or zero-variance input."""


class InsufficientPointsError(MarketEffError):
    """Fewer scaling points than the regression needs."""


class RegressionUndefinedError(MarketEffError):
    """Cross-sectional regression has no spread in the regressor."""


class GenerationError(MarketEffError):
    """Synthetic generator cannot honour its parameters."""


class EstimatorFailure(MarketEffError):
    """Wraps an estimator error with the name of the method that raised it."""

    def __init__(self, method: str, cause: Exception):
        self.method = method
        self.cause = cause
        super().__init__(f"{method}: {type(cause).__name__}: {cause}")
