"""Semantic exception hierarchy for isoband."""


class IsobandError(Exception):
    """Base class for all isoband errors."""


class InvalidInput(IsobandError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateFit(IsobandError, ValueError):
    """The monotone fit is too flexible for the requested estimator.

    Raised by the bias-corrected noise estimator when ``n - c1 * df <= 0``.
    """


class DegenerateSpacings(IsobandError, ValueError):
    """Pooled sample spacings collapsed to zero (tied samples).

    The monotone-density estimator needs strictly positive pooled spacings;
    jitter tied samples before fitting.
    """
