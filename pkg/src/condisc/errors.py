"""Exception hierarchy shared by every module of the package."""


class CondiscError(Exception):
    """Base class for all library errors."""


class BoundExceeded(CondiscError):
    """An enumeration would exceed its configured bound."""

    def __init__(self, what, size, bound):
        super().__init__(f"{what}: size {size} exceeds bound {bound}")
        self.what = what
        self.size = size
        self.bound = bound


class GroundMismatch(CondiscError):
    pass


class NotComparable(CondiscError):
    pass


class TowerMismatch(CondiscError):
    pass


class InvalidTower(CondiscError):
    pass


class IncompatibleCone(CondiscError):
    pass


class PreconditionUnchecked(CondiscError):
    pass


class LeftNotFullyFaithful(CondiscError):
    pass


class WitnessNotIso(CondiscError):
    pass


class ProductPreservationFailed(CondiscError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ValueNotInUnderlying(CondiscError):
    pass


class NotANaturalTransformation(CondiscError):
    pass


class NotLinear(CondiscError):
    pass


class RestrictionUndefined(CondiscError):
    """Restriction along a tower map leaves the presheaf's value set."""


class MalformedInput(CondiscError):
    """Bad CLI or JSON input; the CLI maps this to exit status 64."""
