"""Exception hierarchy shared by every module.

``ContractError`` marks a numerical contract failure (non-Hermitian input,
unnormalized state, degenerate filter); the CLI maps it to exit status 3.
"""


class BellmonoError(Exception):
    """Base class for all package errors."""


class ShapeError(BellmonoError, ValueError):
    """Operand shapes are incompatible."""


class CapacityError(BellmonoError, ValueError):
    """A dimension exceeds the supported maximum."""


class ArgumentError(BellmonoError, ValueError):
    """An argument is outside its domain (bad index set, n out of range, ...)."""


class ContractError(BellmonoError, ArithmeticError):
    """A numerical precondition or postcondition does not hold."""


class DegenerateFilterError(ContractError):
    """A local filter annihilates the state, so it cannot be renormalized."""
