"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ParameterError -> 2, DataError -> 3,
NumericalDegeneracyError -> 4.
"""


class QcorrError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(QcorrError, ValueError):
    """An argument is outside its valid domain (tau, level, rho, counts)."""


class DataError(QcorrError, ValueError):
    """Input data cannot be used (parse failures, wrong shapes)."""


class InsufficientDataError(DataError):
    """Fewer observations than the operation requires."""


class NumericalDegeneracyError(QcorrError, ArithmeticError):
    """A computation is undefined or unstable for this input."""


class DegenerateDesignError(NumericalDegeneracyError):
    """Regressor has no variation, so no slope is identified."""


class DegenerateMomentsError(NumericalDegeneracyError):
    """Sample moments make a plug-in formula undefined (zero variance, |rho| = 1)."""


class SingularInformationError(NumericalDegeneracyError):
    """The information-like matrix in the sandwich is numerically singular."""


class DegenerateVarianceError(NumericalDegeneracyError):
    """The plug-in variance is zero, so no interval or test statistic exists."""


class UndefinedCorrelationError(NumericalDegeneracyError):
    """A correlation is requested for a constant series (zero variance)."""
