"""Exception hierarchy.

Every error that stems from malformed input derives from
:class:`ValidationError`; errors raised by a well-formed request that has no
mathematical answer derive from :class:`ComputationError`.  The CLI maps the
two families onto distinct exit codes.
"""

from __future__ import annotations


class PdmError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ValidationError(PdmError, ValueError):
    pass


class ComputationError(PdmError, ArithmeticError):
    pass


# transition matrices / distributions
class NonSquare(ValidationError):
    pass


class RowSumViolation(ValidationError):
    def __init__(self, row: int, total: float, location: str | None = None):
        self.row = row
        self.total = total
        super().__init__(f"row {row} sums to {total!r}, expected 1", location)


class NegativeEntry(ValidationError):
    def __init__(self, i: int, j: int, value: float, location: str | None = None):
        self.i, self.j, self.value = i, j, value
        super().__init__(f"entry ({i}, {j}) = {value!r} is outside [0, 1]", location)


class LowerTriangleNonZero(ValidationError):
    def __init__(self, i: int, j: int, value: float, location: str | None = None):
        self.i, self.j, self.value = i, j, value
        super().__init__(
            f"entry ({i}, {j}) = {value!r} below the diagonal; health cannot improve",
            location,
        )


class FailureNotAbsorbing(ValidationError):
    pass


class InvalidDistribution(ValidationError):
    pass


class StateOutOfRange(ValidationError):
    def __init__(self, state: int, states: int, location: str | None = None):
        self.state, self.states = state, states
        super().__init__(f"state {state} outside 0..{states - 1}", location)


# topology / CPTs
class Cycle(ValidationError):
    pass


class MultipleChildren(ValidationError):
    pass


class LevelSkip(ValidationError):
    pass


class OrphanNonRoot(ValidationError):
    pass


class MultipleRoots(ValidationError):
    pass


class UnknownNodeReference(ValidationError):
    pass


class DuplicateNode(ValidationError):
    pass


class EmptyParentList(ValidationError):
    pass


class CardinalityMismatch(ValidationError):
    pass


class IncompleteAssignment(ValidationError):
    pass


class InvalidModel(ValidationError):
    pass


# observations
class MissingComponent(ValidationError):
    pass


class UnknownComponent(ValidationError):
    pass


# documents
class DocumentSyntaxError(ValidationError):
    pass


# scheduling / simulation
class InvalidThreshold(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


# computation-domain
class ZeroProbabilityEvidence(ComputationError):
    pass


class ModelTooLarge(ComputationError):
    pass


class TooLarge(ComputationError):
    pass
