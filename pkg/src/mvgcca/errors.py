"""Exception hierarchy shared by every module."""


class MvgccaError(Exception):
    """Base class for all library errors."""

    kind = "error"


class DimensionError(MvgccaError, ValueError):
    kind = "dimension"


class InputError(MvgccaError, ValueError):
    kind = "input"


class ConfigurationError(MvgccaError, ValueError):
    kind = "configuration"


class StateError(MvgccaError, ValueError):
    kind = "state"


class DegenerateDataError(MvgccaError, ValueError):
    kind = "degenerate-data"


class SingularityError(MvgccaError, ValueError):
    kind = "singularity"


class RankDeficientViewError(SingularityError):
    """A view covariance X_m X_m^T is singular, so the primal solver cannot run.

    The dual variant (``fit_gdmcca``) works through N x N Gram matrices and
    is the usual remedy when D_m > N.
    """

    kind = "rank-deficient-view"

    def __init__(self, view, message=None):
        self.view = view
        if message is None:
            message = (
                f"view {view}: X X^T is singular (needs D_m <= N and full row rank); "
                "use the dual variant gdmcca instead"
            )
        super().__init__(message)
