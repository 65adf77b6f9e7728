"""Exception types shared across the package."""


class GeometryError(ValueError):
    """A geometric precondition failed (containment, ordering, bad parameters)."""


class BudgetExceeded(RuntimeError):
    """A search ran out of its configured budget before reaching a verdict."""

    def __init__(self, what, limit, reached=None):
        self.what = what
        self.limit = limit
        self.reached = reached
        msg = f"{what} budget of {limit} exhausted"
        if reached is not None:
            msg += f" (reached {reached})"
        super().__init__(msg)


class OrderingError(RuntimeError):
    """Paths of a disjoint family could not be ordered bottom to top."""


class SeparatorError(ValueError):
    """A vertex set given as separator does not separate s from t, or s and t are adjacent."""
