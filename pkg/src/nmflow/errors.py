"""Exception hierarchy.

NumericalError subclasses carry the name of the failing operation so the
CLI can report it and exit with the dedicated status code.
"""

from __future__ import annotations


class NmflowError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(NmflowError):
    """Operands live on incompatible Hilbert spaces."""


class ValidationError(NmflowError):
    """A domain-type invariant is violated beyond tolerance."""


class NumericalError(NmflowError):
    """A numerical operation failed; carries the operation name."""

    def __init__(self, message: str, operation: str = ""):
        super().__init__(message)
        self.operation = operation


class NonInvertibleError(NumericalError):
    """A dynamical map is numerically singular.

    Signals the regime in which intermediate maps (and hence
    divisibility-based measures) stop being defined.  Carries the
    smallest singular value of the map's matrix representation.
    """

    def __init__(self, message: str, smallest_singular_value: float,
                 operation: str = "intermediate_map"):
        super().__init__(message, operation)
        self.smallest_singular_value = smallest_singular_value


class ZeroCrossingError(NumericalError):
    """A decoherence function modulus fell below the invertibility cutoff."""

    def __init__(self, message: str, time: float, operation: str = "dephasing_rate"):
        super().__init__(message, operation)
        self.time = time


class DivergentIntegralError(NumericalError):
    """A spectral integral diverges; the message names the divergence."""


class DegenerateBasisError(NmflowError):
    """An eigenbasis needed for a dephasing operation is not unique."""


class ConfigError(NmflowError):
    """A scenario configuration is malformed or inconsistent."""
