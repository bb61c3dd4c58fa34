"""Exception hierarchy shared by every module.

Each class carries an ``exit_code`` used by the command-line front end:
2 for bad input, 3 for numerical failures.
"""

from __future__ import annotations


class DynZetaError(Exception):
    exit_code = 3

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def to_json(self) -> dict:
        return {
            "error": type(self).__name__,
            "message": str(self),
            "exit_code": self.exit_code,
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


class DomainError(DynZetaError, ValueError):
    """Input outside the mathematical domain of an operation."""

    exit_code = 2


class ValidationError(DomainError):
    """A data record violates a type invariant."""


class ParseError(DomainError):
    """Malformed input file."""


class WrongCaseError(DomainError):
    """Weyl-invariant representation given where a non-invariant one is required, or vice versa."""


class NumericalError(DynZetaError):
    """Quadrature or iteration failed to reach the requested accuracy."""


class DivergenceError(NumericalError):
    """Evaluation point lies outside the half-plane of absolute convergence."""


class TruncationError(NumericalError):
    """The requested tail tolerance cannot be reached."""


class SingularDeterminantError(NumericalError):
    """A factor lambda + s^2 vanishes."""


class BranchMismatchError(NumericalError):
    """Two sides of a phase identity disagree by a non-integer winding."""


class InvariantViolation(DynZetaError, AssertionError):
    """An identity that must hold exactly failed; indicates a bug."""


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)
