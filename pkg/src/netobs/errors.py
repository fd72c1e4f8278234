"""Exception types shared across the package."""


class NetobsError(Exception):
    """Base class for errors raised by this package."""


class InputError(NetobsError, ValueError):
    """Malformed input: bad ids, self-loops, bad parameters, unparsable files."""


class MetricDomainError(NetobsError, ValueError):
    """A metric is undefined for the given arguments (e.g. local metric at n_c = n)."""


class BudgetError(NetobsError, RuntimeError):
    """A computation would exceed its resource budget."""
