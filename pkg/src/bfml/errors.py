"""Exception hierarchy. Everything raised on bad input derives from BFMLError."""


class BFMLError(ValueError):
    pass


class BadEmptySetValue(BFMLError):
    """f(empty) must be exactly 1 (or rho(empty) exactly 0 for rank tables)."""


class SizeMismatch(BFMLError):
    pass


class DuplicateLabel(BFMLError):
    pass


class OrderTooLarge(BFMLError):
    pass


class UnknownLabel(BFMLError):
    pass


class BadMinorSpec(BFMLError):
    pass


class UndefinedMinor(BFMLError):
    """A deletion whose denominator sum vanishes."""

    def __init__(self, delete_set, message=None):
        self.delete_set = tuple(delete_set)
        if message is None:
            message = "deletion of {%s} is undefined (zero subset sum)" % ",".join(self.delete_set)
        super().__init__(message)


class NotRankable(BFMLError):
    pass


class NonIntegerRank(BFMLError):
    pass


class BadParameters(BFMLError):
    pass


class DimensionMismatch(BFMLError):
    pass


class NotAMatroid(BFMLError):
    pass


class BudgetExceeded(BFMLError):
    pass


class UnknownTheorem(BFMLError):
    pass


class SchemaError(BFMLError):
    pass


class NonRationalValue(SchemaError):
    pass
