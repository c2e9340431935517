"""Exception hierarchy; the CLI maps each class to an exit status."""


class ZenError(Exception):
    """Base class for all library errors."""


class SpecFormatError(ZenError):
    """Malformed input document (bad JSON, missing or mistyped field)."""


class ValidationError(ZenError):
    """Input is well formed but mathematically inadmissible.

    Examples: a measure failing the doubling condition, a map that is not
    a self-map of the right half-plane, a non-causal matrix.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConvergenceError(ZenError):
    """A quadrature or root-finder did not reach its tolerance."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
