"""Exception hierarchy.

The CLI maps these onto exit codes: parse/validation errors -> 2,
evaluation errors -> 3, precondition violations -> 4.
"""


class ChowError(Exception):
    """Base class for every error raised by the engine."""


# -- validation (construction of rings, morphisms, families, model files) --


class ValidationError(ChowError):
    pass


class DuplicateBasisName(ValidationError):
    pass


class ProjectionFormulaViolation(ValidationError):
    pass


class NotRingHomomorphism(ValidationError):
    pass


class DegreeMismatch(ValidationError):
    pass


class UnknownModel(ValidationError):
    pass


# -- evaluation --


class EvaluationError(ChowError):
    pass


class RingMismatch(EvaluationError):
    pass


class NonNilpotentInput(EvaluationError):
    pass


class NoPointClass(EvaluationError):
    pass


class CompositionMismatch(EvaluationError):
    pass


class UnsupportedModel(EvaluationError):
    pass


class NotPositiveInteger(EvaluationError):
    pass


class UnboundName(EvaluationError):
    pass


# -- preconditions of the DR formulas --


class PreconditionError(ChowError):
    pass


class InvalidRank(PreconditionError):
    pass


class NotAbelianFamily(PreconditionError):
    pass


class NotACurveFamily(PreconditionError):
    pass


class InvalidGenus(PreconditionError):
    pass


# -- text surface --


class DSLSyntaxError(ChowError):
    """Malformed expression or model file.

    ``line``/``column`` are 1-based; ``expected`` is the set of token
    descriptions that would have been accepted at that point.
    """

    def __init__(self, message, line=None, column=None, expected=()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        where = f"{line}:{column}: " if line is not None else ""
        tail = ""
        if self.expected:
            tail = " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(f"{where}{message}{tail}")


class ModelFileError(ValidationError):
    """A declaration in a model file failed validation; carries its location."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class ForwardReference(ModelFileError):
    pass
