"""Grenander estimation of a monotone nonincreasing density on [0, 1].

The estimator is the left-continuous piecewise-constant derivative of the
least concave majorant of the empirical CDF.  It is computed here through
an isotonic projection: with sorted samples ``Z_(1) <= ... <= Z_(n)`` and
``Z_(0) = 0``, project the scaled spacings ``n (Z_(i) - Z_(i-1))`` onto the
nondecreasing cone and invert the fitted values.  A finite-sample uniform
error band and order-statistic concentration bounds round out the module.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_delta, check_nonnegative, check_positive, check_positive_int
from .exceptions import DegenerateSpacings, InvalidInput
from .isotonic import pava


def _as_unit_samples(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInput("samples must be a nonempty 1-D collection")
    # NaN propagates through min/max and fails both comparisons
    if not (0.0 <= float(np.min(arr)) and float(np.max(arr)) <= 1.0):
        raise InvalidInput("samples must be finite and lie within [0, 1]")
    return arr


def empirical_cdf(samples, t: float) -> float:
    """Empirical CDF ``(1/n) #{Z_i <= t}`` evaluated exactly at ``t``."""
    arr = _as_unit_samples(samples)
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise InvalidInput(f"t must lie in [0, 1], got {t}")
    ordered = np.sort(arr)
    return float(np.searchsorted(ordered, t, side="right")) / arr.shape[0]


@dataclass(frozen=True)
class GrenanderEstimate:
    """Piecewise-constant monotone density estimate.

    Attributes
    ----------
    breakpoints : ndarray of shape (n + 1,)
        ``0, Z_(1), ..., Z_(n)``; the estimate takes value
        ``density_values[i]`` on ``(breakpoints[i], breakpoints[i + 1]]``
        (and at 0), and 0 beyond ``Z_(n)``.
    density_values : ndarray of shape (n,)
        Nonincreasing positive values; the estimate integrates to 1 over
        ``[0, Z_(n)]``.
    """

    breakpoints: np.ndarray
    density_values: np.ndarray

    @property
    def n(self) -> int:
        return int(self.density_values.shape[0])

    def pdf(self, t):
        """Evaluate the density estimate (vectorized, left-continuous)."""
        t = np.asarray(t, dtype=np.float64)
        if np.any(t < 0.0) or np.any(t > 1.0):
            raise InvalidInput("t must lie in [0, 1]")
        idx = np.searchsorted(self.breakpoints[1:], t, side="left")
        padded = np.concatenate((self.density_values, [0.0]))
        out = padded[idx]
        return float(out) if out.ndim == 0 else out

    def cdf(self, t):
        """Integral of the estimate from 0 to ``t`` (piecewise linear)."""
        t = np.asarray(t, dtype=np.float64)
        if np.any(t < 0.0) or np.any(t > 1.0):
            raise InvalidInput("t must lie in [0, 1]")
        widths = np.diff(self.breakpoints)
        cum = np.concatenate(([0.0], np.cumsum(self.density_values * widths)))
        idx = np.searchsorted(self.breakpoints[1:], t, side="left")
        idx = np.minimum(idx, self.n - 1)
        out = cum[idx] + self.density_values[idx] * np.clip(
            t - self.breakpoints[idx], 0.0, None
        )
        out = np.minimum(out, cum[-1])
        return float(out) if out.ndim == 0 else out

    def total_mass(self) -> float:
        return float(np.sum(self.density_values * np.diff(self.breakpoints)))


def grenander_fit(samples, assume_sorted: bool = False) -> GrenanderEstimate:
    """Fit the Grenander estimator to samples in [0, 1].

    Parameters
    ----------
    samples : array-like of shape (n,)
        Points in [0, 1]; order is irrelevant.
    assume_sorted : bool
        Skip the sort when the caller guarantees nondecreasing input
        (values are still range-checked).

    Returns
    -------
    GrenanderEstimate

    Raises
    ------
    DegenerateSpacings
        If pooling leaves a fitted spacing at zero (tied samples at the
        lower end); jitter ties before fitting.

    Examples
    --------
    >>> est = grenander_fit([0.1, 0.2, 0.9])
    >>> est.density_values
    array([3.33333333, 3.33333333, 0.47619048])
    """
    arr = _as_unit_samples(samples)
    n = arr.shape[0]
    if assume_sorted:
        ordered = arr
    else:
        # timsort degrades to O(n) on the already-sorted inputs common here
        ordered = np.sort(arr, kind="stable")
    spacings = np.empty(n, dtype=np.float64)
    spacings[0] = ordered[0]
    np.subtract(ordered[1:], ordered[:-1], out=spacings[1:])
    spacings *= n
    fit = pava(spacings)
    if fit.fitted[0] <= 0.0:
        raise DegenerateSpacings(
            "pooled spacings at zero: tied samples; jitter before fitting"
        )
    values = 1.0 / fit.fitted
    breakpoints = np.empty(n + 1, dtype=np.float64)
    breakpoints[0] = 0.0
    breakpoints[1:] = ordered
    values.setflags(write=False)
    breakpoints.setflags(write=False)
    return GrenanderEstimate(breakpoints=breakpoints, density_values=values)


@dataclass(frozen=True)
class DensityBand:
    """Uniform error band for the Grenander estimator.

    For a nonincreasing L-Lipschitz density bounded below by c, the sup
    error over ``[margin_delta, 1 - margin_delta]`` is at most
    ``half_width`` with the requested probability, provided ``valid`` (the
    margin is small enough for the guarantee to apply; otherwise n is too
    small and ``half_width`` is None).
    """

    margin_delta: float
    half_width: float | None
    valid: bool


def grenander_band(c: float, L: float, n: int, delta: float) -> DensityBand:
    """Finite-sample sup-error band for a c-bounded, L-Lipschitz density.

    The margin is
    ``9 (1/c + L / (2 c^3)) * cbrt(log((n^2 + n) / delta) / n)`` and the
    half-width is ``margin / (u * (u - margin))`` with ``u = 1 / (c + L)``;
    the band is valid only while the margin stays strictly below ``u``.
    """
    c = check_positive(c, "c")
    L = check_nonnegative(L, "L")
    n = check_positive_int(n, "n")
    delta = check_delta(delta)
    margin = 9.0 * (1.0 / c + L / (2.0 * c**3)) * (
        math.log((n * n + n) / delta) / n
    ) ** (1.0 / 3.0)
    u = 1.0 / (c + L)
    if margin >= u:
        return DensityBand(margin_delta=margin, half_width=None, valid=False)
    return DensityBand(
        margin_delta=margin, half_width=margin / (u * (u - margin)), valid=True
    )


def uniform_order_stat_bound(n: int, i: int, j: int, delta: float) -> float:
    """Simultaneous deviation bound for gaps of uniform order statistics.

    With probability at least ``1 - delta``, for all ranks
    ``0 <= i < j <= n`` (rank 0 meaning the fixed point 0),
    ``|U_(j) - U_(i) - (j - i) / n|`` is at most
    ``(sqrt(3 (j - i) log((n^2 + n) / delta)) + 2 log((n^2 + n) / delta)) / n``.
    """
    n = check_positive_int(n, "n")
    if not (isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer))):
        raise InvalidInput("i and j must be integers")
    if not 0 <= i < j <= n:
        raise InvalidInput(f"need 0 <= i < j <= n, got i={i}, j={j}, n={n}")
    delta = check_delta(delta)
    log_term = math.log((n * n + n) / delta)
    return (math.sqrt(3.0 * (j - i) * log_term) + 2.0 * log_term) / n


def sup_abs_error(estimate: GrenanderEstimate, density, lo: float, hi: float,
                  grid_points: int = 0) -> float:
    """Sup of ``|density(t) - estimate.pdf(t)|`` over ``[lo, hi]``.

    Exact for densities that are monotone/linear between the estimator's
    breakpoints: on each piece the gap to a constant is extremal at the
    endpoints, so evaluating at clipped breakpoints suffices.  An optional
    uniform grid is included as belt and braces.
    """
    if not 0.0 <= lo <= hi <= 1.0:
        raise InvalidInput("need 0 <= lo <= hi <= 1")
    breakpoints = estimate.breakpoints
    # pieces intersecting [lo, hi]; breakpoints are sorted, so bisect
    first = int(np.searchsorted(breakpoints[1:], lo, side="left"))
    last = int(np.searchsorted(breakpoints[:-1], hi, side="right")) - 1
    sup = 0.0
    if first <= last:
        values = estimate.density_values[first : last + 1]
        a = np.clip(breakpoints[first : last + 1], lo, hi)
        b = np.clip(breakpoints[first + 1 : last + 2], lo, hi)
        sup = max(
            float(np.max(np.abs(np.asarray(density(a)) - values))),
            float(np.max(np.abs(np.asarray(density(b)) - values))),
        )
    if hi > estimate.breakpoints[-1]:
        tail = np.clip(estimate.breakpoints[-1], lo, hi)
        sup = max(sup, float(np.max(np.abs(np.asarray(density(np.array([tail, hi])))))))
    if grid_points > 0:
        grid = np.linspace(lo, hi, grid_points)
        sup = max(sup, float(np.max(np.abs(np.asarray(density(grid)) - estimate.pdf(grid)))))
    return sup
