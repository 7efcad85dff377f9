"""Exceptions raised by the engine.

Every failure that originates in the engine derives from ``EngineError`` so the
CLI can tell a mathematical refusal apart from an I/O or programming error.
"""


class EngineError(Exception):
    """Base class for engine failures."""


class InvalidIndexError(EngineError, ValueError):
    """A composite index, letter or exponent violates its admissible range."""


class TruncationError(EngineError, RuntimeError):
    """The certified tail bound could not be met within the summation cap."""


class DivergentIntegralError(EngineError, ValueError):
    """The requested integral does not converge at the upper end."""


class SingularExponentError(EngineError, ValueError):
    """Regularization hits a pole; ``exponent`` names the offending value."""

    def __init__(self, message: str, exponent: int):
        super().__init__(f"{message} (exponent {exponent})")
        self.exponent = exponent


class OracleLimitError(EngineError, RuntimeError):
    """A reference computation was asked for more than its guard allows."""


class PrecisionSelfTestError(EngineError, RuntimeError):
    """The working precision failed the startup self-test."""


class UnknownSuiteError(EngineError, ValueError):
    """A verification suite or grid name is not registered."""
