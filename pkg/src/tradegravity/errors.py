"""Exception and warning types shared across the package."""


class GravityError(Exception):
    """Base class for every typed failure raised by this package."""


# domain
class MissingYear(GravityError):
    pass


class InvalidWorldGDP(GravityError):
    pass


class EmptyPanel(GravityError):
    pass


# io
class SchemaError(GravityError):
    pass


class IoError(GravityError):
    pass


class NegativeShare(GravityError):
    pass


# tradability
class DivisionByZeroShare(GravityError):
    pass


class EmptyTable(GravityError):
    pass


class SectorMismatch(GravityError):
    pass


# gravity
class LogDomainError(GravityError, ValueError):
    pass


class DegenerateRegressor(GravityError):
    pass


# econometrics
class SingularDesign(GravityError):
    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"design matrix is rank deficient at column {column}")


class CollinearWithinGroups(GravityError):
    pass


class TooFewGroups(GravityError):
    pass


class IncompatibleResults(GravityError):
    pass


class InconsistentInputs(GravityError):
    pass


class SingularCovariance(GravityError):
    pass


class InvalidDistribution(GravityError):
    pass


class InvalidConfig(GravityError):
    pass


class NegativePredictionWarning(UserWarning):
    """An imperfect-specialization prediction came out negative (gamma_b < gamma_a)."""


class VarianceComponentWarning(UserWarning):
    """A variance component was clamped or a covariance difference was not positive definite."""
