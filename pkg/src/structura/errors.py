"""Exception hierarchy.

Two families matter to callers: :class:`InputError` for malformed or
inconsistent input (bad shapes, unknown points, files that do not parse) and
:class:`Rejection` for well-formed input that fails a mathematical condition
(a presheaf that is not a sheaf, a cover that is not a refinement, ...).
The CLI maps them to exit codes 2 and 1 respectively.
"""


class StructuraError(Exception):
    pass


class InputError(StructuraError):
    pass


class Rejection(StructuraError):
    pass


# finspace
class MissingEmptyOrFull(Rejection):
    pass


class NotClosedUnderUnion(Rejection):
    pass


class NotClosedUnderIntersection(Rejection):
    pass


class UnknownPoint(InputError):
    pass


class NotAnOpen(Rejection):
    pass


class NotACover(Rejection):
    pass


class NotARefinement(Rejection):
    pass


# exactla
class ShapeMismatch(InputError):
    pass


class CompositionNotZero(Rejection):
    pass


class NotAHomomorphism(Rejection):
    pass


class NotDirected(Rejection):
    pass


class NotFunctorial(Rejection):
    pass


# strcat
class AlignmentMismatch(Rejection):
    pass


class ComponentShapeMismatch(Rejection):
    pass


# sheaf
class WrongValueKind(InputError):
    pass


class PresheafLawsViolated(Rejection):
    pass


class NotASheaf(Rejection):
    pass


class NotPartitionable(Rejection):
    pass


class IndexSetMismatch(Rejection):
    pass


class TagMismatch(Rejection):
    pass


# complex
class RowNotAComplex(Rejection):
    pass


class VerticalShapeMismatch(InputError):
    pass


class AnticommutationFails(Rejection):
    pass


class TruncationExceeded(InputError):
    pass


# rings / ringspec
class NotARing(Rejection):
    pass


class TooLarge(InputError):
    pass


class NotPrime(Rejection):
    pass


class DecompositionFails(Rejection):
    pass


class StalkNotLocal(Rejection):
    pass


# hochschild
class NotAssociative(Rejection):
    pass


class DegreeTooLarge(InputError):
    pass


class MixedCharacteristic(Rejection):
    pass


class SectionRingNotAlgebra(Rejection):
    pass


# ktheory
class RankNotLocallyConstant(Rejection):
    pass


class BaseMismatch(InputError):
    pass


class IndexMismatch(InputError):
    pass


class MonoidAxiomsFail(Rejection):
    pass


# cli
class ParseError(InputError):
    pass


class UnknownCommand(InputError):
    pass


class OptionConflict(InputError):
    pass
