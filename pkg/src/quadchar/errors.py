"""Exception types shared across the package."""


class NotFundamentalError(ValueError):
    """Raised when an integer is not a fundamental discriminant."""

    def __init__(self, d):
        super().__init__(f"{d} is not a fundamental discriminant")
        self.d = d


class DataError(Exception):
    """Input was well formed but the data it selects cannot support the request."""


class EmptyWindowError(DataError):
    def __init__(self, lo, hi):
        super().__init__(f"no fundamental discriminant d with {lo} < |d| <= {hi}")
        self.lo = lo
        self.hi = hi


class DegenerateFitError(DataError):
    pass
