"""Exception types shared across the library."""


class AtcdError(Exception):
    """Base class for every error raised by this package."""


# document / tree validation


class ValidationError(AtcdError):
    """A tree document failed structural validation."""


class DuplicateId(ValidationError):
    pass


class DanglingChildRef(ValidationError):
    pass


class CycleDetected(ValidationError):
    pass


class NoRoot(ValidationError):
    pass


class MultipleRoots(ValidationError):
    pass


class LeafGate(ValidationError):
    pass


class InternalBAS(ValidationError):
    pass


class MissingCost(ValidationError):
    pass


class NegativeAttribute(ValidationError):
    pass


class ProbOutOfRange(ValidationError):
    pass


class KeyIsNotGate(ValidationError):
    pass


class NotTreelike(AtcdError):
    """A treelike-only analysis was asked to run on a DAG-shaped tree."""


# optimization / solving


class InfeasibleDamageThreshold(AtcdError):
    """No attack reaches the requested damage level."""


class BudgetExceeded(AtcdError):
    """The branch-and-bound node budget ran out before an optimum was proven."""


class NonFiniteAttribute(AtcdError):
    pass


class UnscalableAttribute(AtcdError):
    """An attribute has more than six fractional decimal digits and cannot be
    scaled to the integer grid used by the 0/1 programming backend."""


# brute-force guards


class TooManyBas(AtcdError):
    """Exhaustive enumeration refused: too many basic attack steps."""


class TooManyActiveBas(AtcdError):
    """Actualization enumeration refused: too many active steps in the attack."""


# constructions


class LengthMismatch(AtcdError):
    pass


class NegativeCoefficient(AtcdError):
    pass


class NotMonotone(AtcdError):
    pass


class TooLarge(AtcdError):
    pass


class OutOfRange(AtcdError):
    pass


# generator


class EmptyTree(AtcdError):
    pass


class NoBlocks(AtcdError):
    pass
