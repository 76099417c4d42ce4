"""Exception hierarchy shared by every module."""


class CrossMetricError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstance(CrossMetricError, ValueError):
    pass


class OnHyperplane(CrossMetricError, ValueError):
    """A point lies exactly on a hyperplane, so its side is undefined."""


class ResampleExhausted(CrossMetricError, RuntimeError):
    pass


class DimensionUnsupported(CrossMetricError, ValueError):
    pass


class BudgetExceeded(CrossMetricError, RuntimeError):
    """An operation budget (cells created or cells visited) ran out."""


class GapDegenerate(CrossMetricError, ValueError):
    """Embedding parameters leave no usable near/far gap."""


class DuplicateId(CrossMetricError, KeyError):
    pass


class UnknownId(CrossMetricError, KeyError):
    pass


class NotFound(CrossMetricError, LookupError):
    pass
