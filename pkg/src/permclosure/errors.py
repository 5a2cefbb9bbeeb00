"""Exception hierarchy shared by all modules."""


class PermClosureError(Exception):
    """Base class for every error raised by this package."""


class DegreeMismatch(PermClosureError, ValueError):
    pass


class OrderCapExceeded(PermClosureError, RuntimeError):
    """A group would have to be materialized beyond the configured order cap."""


class NotAnOrbit(PermClosureError, ValueError):
    pass


class NotASubgroup(PermClosureError, ValueError):
    pass


class NotTransitive(PermClosureError, ValueError):
    pass


class NotABlockSystem(PermClosureError, ValueError):
    pass


class NotNormalBlockSystem(NotABlockSystem):
    pass


class NotInvariant(PermClosureError, ValueError):
    pass


class MaximumNotUnique(PermClosureError, AssertionError):
    """The qualifying subgroups of a wreath stabilizer have no unique maximum."""


class DegreeTooLarge(PermClosureError, ValueError):
    pass


class NotRegularCyclic(PermClosureError, ValueError):
    pass


class IdentityInConnectionSet(PermClosureError, ValueError):
    pass


class NonUnitElement(PermClosureError, ValueError):
    pass


class NotDoubleCosetClosed(PermClosureError, ValueError):
    pass


class IntersectsSubgroup(PermClosureError, ValueError):
    pass


class SizeTooLarge(PermClosureError, ValueError):
    pass


class NotCayleyObject(PermClosureError, ValueError):
    pass


class ParseError(PermClosureError, ValueError):
    pass
