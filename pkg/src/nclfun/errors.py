"""Exception types shared across the package.

Every failure mode that callers are expected to catch has its own class
here, so tests and the CLI can distinguish "bad input" from "computation
found a genuine obstruction".
"""

__all__ = [
    "NclError",
    "NonUnitConstantTerm",
    "ParseError",
    "InvariantViolation",
    "InvalidGroup",
    "NotASubgroup",
    "NotNormal",
    "ConventionOverflow",
    "SingularEvaluation",
    "WrongGroup",
    "NotSQuasiIso",
    "PrecisionMismatch",
]


class NclError(Exception):
    """Base class for all package-specific errors."""


class NonUnitConstantTerm(NclError):
    """A power series was asked to invert but its constant term is not a unit."""


class ParseError(NclError):
    """An instance file is malformed; the message carries line context."""


class InvariantViolation(NclError):
    """Structured data failed one of its declared invariants after construction."""


class InvalidGroup(NclError):
    """Group table, action, or action order fails an axiom; names the first one."""


class NotASubgroup(NclError):
    """The requested member set is not closed or not stable under the action."""


class NotNormal(NclError):
    """A quotient was requested along a subgroup that is not normal."""


class ConventionOverflow(NclError):
    """Evaluation produced a negative power of T that the target ring cannot hold."""


class SingularEvaluation(NclError):
    """A determinant needed as a denominator fell outside the allowed multiplicative set."""


class WrongGroup(NclError):
    """An operation that needs the trivial finite part was given a larger group."""


class NotSQuasiIso(NclError):
    """A square matrix expected to be invertible after localisation has a bad determinant."""


class PrecisionMismatch(NclError):
    """Two working precisions disagreed where agreement is required for a verdict."""
