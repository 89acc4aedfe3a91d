"""Exceptions raised by the pathlike library."""


class PathlikeError(ValueError):
    """Base class for every error raised by pathlike."""


class DomainError(PathlikeError):
    """An argument lies outside the domain of the operation."""


class InvalidProfileError(PathlikeError):
    """A metric profile failed its construction-time checks."""


class UnsupportedConfigurationError(PathlikeError):
    """The operation only supports configurations over two directions."""


class NotQuadraticError(PathlikeError):
    """The average-of-two-paths form was requested for a non-quadratic f."""


class InfeasibleTimeError(PathlikeError):
    """The target point is not influenced by the source at the requested time."""


class ConfigError(PathlikeError):
    """A configuration file contains unknown keys or malformed values."""


class SeriesNotConvergedError(PathlikeError):
    """
    A series ran out of terms before meeting its stopping rule.

    Attributes:
        partial (float): Partial sum reached when the policy was exhausted
        terms_used (int): Number of terms included in the partial sum
    """

    def __init__(self, message, partial, terms_used):
        super().__init__(message)
        self.partial = partial
        self.terms_used = terms_used


class ContourInconsistentError(PathlikeError):
    """
    The contour quadrature left an imaginary part above threshold.

    Attributes:
        imag_residue (float): Imaginary part of the quadrature sum
    """

    def __init__(self, message, imag_residue):
        super().__init__(message)
        self.imag_residue = imag_residue


class QuadratureNotConvergedError(PathlikeError):
    """
    Nested quadrature could not reach the requested tolerance.

    Attributes:
        best_estimate (float): Value from the highest order tried
        error_estimate (float): Difference between the last two orders
    """

    def __init__(self, message, best_estimate, error_estimate):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate
