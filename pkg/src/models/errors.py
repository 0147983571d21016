class LoscError(Exception):
    """Base class for every error raised by the Legendre oscillator toolkit."""


class DomainError(LoscError, ValueError):
    """An argument lies outside the region where the quantity is defined."""


class DimensionError(LoscError, ValueError):
    """A truncation dimension is too small for the requested operator."""


class NoConvergence(LoscError, ArithmeticError):
    """A series or quadrature exhausted its budget before meeting its tolerance."""


class NonFinite(LoscError, ArithmeticError):
    """An integrand returned inf or nan at an interior node."""


class TruncationError(LoscError):
    """The Fock-space truncation is too small for the requested state."""
