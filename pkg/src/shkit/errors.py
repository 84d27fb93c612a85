"""Exception hierarchy. Everything raised on bad input derives from ShkitError."""


class ShkitError(ValueError):
    pass


class NonFinite(ShkitError):
    pass


class NotHermitian(ShkitError):
    pass


class NoConvergence(ShkitError):
    pass


class NegativeEigenvalue(ShkitError):
    pass


class NotPositive(NegativeEigenvalue):
    pass


class ZeroMetric(ShkitError):
    pass


class DimensionMismatch(ShkitError):
    pass


class NotCompatible(ShkitError):
    pass


class BadRank(ShkitError):
    pass


class UnknownBound(ShkitError, KeyError):
    def __str__(self):
        return ValueError.__str__(self)


class ParamOutOfDomain(ShkitError):
    pass


class IncompatibleOperandRoles(ShkitError):
    pass


class OperandConstraint(ShkitError):
    """Operands violate a side condition a bound is stated under (e.g. QR = SP)."""
