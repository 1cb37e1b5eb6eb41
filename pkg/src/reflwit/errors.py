"""Exception hierarchy.

Precondition failures derive from :class:`PreconditionError` (CLI exit 2);
anything else deriving from :class:`ReflwitError` signals an internal
consistency failure (CLI exit 3).
"""


class ReflwitError(Exception):
    pass


class PreconditionError(ReflwitError):
    pass


class RankOutOfRange(PreconditionError):
    pass


class DegenerateInput(PreconditionError):
    pass


class GroupTooLarge(ReflwitError):
    pass


class MinorFactorizationUnknown(PreconditionError):
    pass


class DomainMismatch(PreconditionError):
    pass


class ShapeError(PreconditionError):
    pass


class NoCanonicalInvariants(PreconditionError):
    pass


class NoSolution(PreconditionError):
    pass


class NotInvariant(PreconditionError):
    pass


class NoFormsAtDegree(PreconditionError):
    pass


class HypothesisViolated(PreconditionError):
    pass


class DegenerateFlat(PreconditionError):
    pass


class NotGeneral(PreconditionError):
    pass


class DegenerateBasePoint(PreconditionError):
    pass


class NotInSparseForm(PreconditionError):
    pass


class LinearityViolated(PreconditionError):
    pass


class FactorizationFailed(ReflwitError):
    pass


class LocusMismatch(ReflwitError):
    pass


class ConstructionFailed(ReflwitError):
    pass


class SearchFailed(ReflwitError):
    pass
