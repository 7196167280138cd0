"""Exception hierarchy shared by all sdplab modules."""


class SdpLabError(Exception):
    """Base class for every error raised by sdplab."""


class DimensionError(SdpLabError, ValueError):
    pass


class DomainError(SdpLabError, ValueError):
    pass


class NumericalError(SdpLabError, ArithmeticError):
    pass


class NotPositiveDefiniteError(NumericalError):
    pass


class SingularSystemError(NumericalError):
    """Schur complement could not be factored (dependent A_i or extreme ill-conditioning)."""


class StallError(NumericalError):
    """No admissible stepsize could be found."""


class NumericalFailure(NumericalError):
    """A solve did not reach its target; ``trace`` holds the diagnostics when available."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class InfeasibleAffineError(SdpLabError):
    """The affine system A(X) = b has no solution."""


class GenerationError(SdpLabError):
    pass


class InconsistencyError(SdpLabError):
    """Two certificates that cannot coexist were both validated."""


class ParseError(SdpLabError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IoError(SdpLabError, OSError):
    """Input could not be read or output could not be written."""
