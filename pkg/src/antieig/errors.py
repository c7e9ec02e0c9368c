"""Exception types shared by all modules.

The CLI maps these onto exit codes, so library code raises them instead of
bare ``ValueError``/``RuntimeError`` wherever the distinction matters.
"""


class AntieigError(Exception):
    """Base class for package errors."""


class InputError(AntieigError, ValueError):
    """Malformed or out-of-range input (bad shape, bad parameter range)."""


class PreconditionError(AntieigError, ValueError):
    """Input is well formed but violates an operation's structural requirement."""


class NumericalFailure(AntieigError, ArithmeticError):
    """An iterative or numerical procedure failed to deliver a usable result."""
