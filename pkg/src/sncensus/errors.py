"""Shared exception types."""


class ReduciblePolynomial(ValueError):
    """A defining polynomial factors over the rationals."""


class PrecisionFailure(ArithmeticError):
    """Numeric roots could not be separated at the requested precision."""


class PrecisionExhausted(ArithmeticError):
    """Resolvent coefficients could not be rounded unambiguously."""


class NotSquarefree(ValueError):
    """A polynomial expected to be squarefree has a repeated factor."""


class TooLarge(ValueError):
    """A computation exceeds its enumeration guard."""


class Reducible(ValueError):
    """An operation requiring an irreducible polynomial received a reducible one."""


class DegenerateFamily(ValueError):
    """An iterated discriminant vanished identically."""
