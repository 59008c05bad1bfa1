"""Exception hierarchy.

Input problems (bad shapes, unparsable files, out-of-range parameters)
derive from :class:`InvalidInputError`; failures that stem from the
numerical content of otherwise well-formed input (degenerate covariance,
singular correlation, missing null space) derive from :class:`DomainError`.
The CLI maps the first family to exit status 2 and the second to 3.
"""


class SchmidtError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(SchmidtError, ValueError):
    pass


class UnsupportedOrderError(InvalidInputError):
    pass


class InvalidSpectrumError(InvalidInputError):
    pass


class DomainError(SchmidtError, ArithmeticError):
    pass


class DegenerateCovarianceError(DomainError):
    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class NoNullSpaceError(DomainError):
    pass


class EmptySupportError(DomainError):
    pass


class DegenerateMarginalError(DomainError):
    pass


class SingularCorrelationError(DomainError):
    pass


class InconsistentRhoError(DomainError):
    pass


class DegeneratePairError(DomainError):
    def __init__(self, message, multiplicity):
        super().__init__(message)
        self.multiplicity = multiplicity


class InsufficientSupportError(DomainError):
    pass
