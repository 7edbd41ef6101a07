"""Exact isotonic projection onto the nondecreasing cone.

The central operation is :func:`pava`, a pool-adjacent-violators solver for

    minimize ||y - z||_2^2  subject to  z_1 <= ... <= z_n.

Two alternative formulations are provided as cross-checking oracles:
:func:`minmax_iso` (exhaustive min-max over windows, O(n^2) per coordinate)
and :func:`slow_projection` (cyclic projection onto the pairwise-order
half-spaces, which converges to the same limit).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import as_sequence, check_index, check_positive, check_positive_int
from .exceptions import InvalidInput


def _pava_kernel(y):
    # Block stack with (sum, count) sufficient statistics; merge while the
    # previous block mean strictly exceeds the current one.  Comparison uses
    # cross-multiplication to avoid per-step divisions.
    n = y.shape[0]
    sums = np.empty(n, dtype=np.float64)
    counts = np.empty(n, dtype=np.int64)
    nb = 0
    for k in range(n):
        s = y[k]
        c = 1
        while nb > 0 and sums[nb - 1] * c > s * counts[nb - 1]:
            s += sums[nb - 1]
            c += counts[nb - 1]
            nb -= 1
        sums[nb] = s
        counts[nb] = c
        nb += 1
    fitted = np.empty(n, dtype=np.float64)
    bounds = np.empty(nb + 1, dtype=np.int64)
    bounds[0] = 0
    pos = 0
    for b in range(nb):
        level = sums[b] / counts[b]
        for _ in range(counts[b]):
            fitted[pos] = level
            pos += 1
        bounds[b + 1] = pos
    return fitted, bounds


try:
    from numba import njit

    _pava_kernel = njit(cache=True, nogil=True)(_pava_kernel)
except ImportError:  # pragma: no cover - numba is a declared dependency
    pass


@dataclass(frozen=True)
class IsotonicFit:
    """Least-squares monotone fit with its level-set structure.

    Attributes
    ----------
    fitted : ndarray
        The projected, nondecreasing vector (read-only).
    blocks : tuple of (start, stop, level)
        Maximal constant runs of ``fitted`` as half-open 0-based index
        ranges.  Consecutive levels strictly increase and each level equals
        the mean of the input over its run.
    df : int
        Number of blocks, i.e. the number of distinct fitted values.
    """

    fitted: np.ndarray
    blocks: tuple[tuple[int, int, float], ...]
    df: int


def pava(y) -> IsotonicFit:
    """Project ``y`` onto the cone of nondecreasing vectors.

    Pool-adjacent-violators: adjacent blocks are merged (and replaced by
    their pooled mean) while they violate the ordering.  Runs in O(n).

    Parameters
    ----------
    y : array-like of shape (n,)
        Finite observations, n >= 1.

    Returns
    -------
    IsotonicFit

    Examples
    --------
    >>> pava([2.0, 1.0]).fitted
    array([1.5, 1.5])
    >>> pava([3.0, 1.0, 2.0]).df
    1
    """
    y = as_sequence(y, "y")
    fitted, bounds = _pava_kernel(y)
    fitted.setflags(write=False)
    # report maximal constant runs: merge pooled blocks whose means tie
    blocks: list[tuple[int, int, float]] = []
    for b in range(bounds.shape[0] - 1):
        start, stop = int(bounds[b]), int(bounds[b + 1])
        level = float(fitted[start])
        if blocks and blocks[-1][2] == level:
            blocks[-1] = (blocks[-1][0], stop, level)
        else:
            blocks.append((start, stop, level))
    return IsotonicFit(fitted=fitted, blocks=tuple(blocks), df=len(blocks))


def minmax_iso(y, k) -> float:
    """k-th coordinate of the isotonic projection via the min-max formula.

    Evaluates ``min over j >= k of max over i <= k of mean(y[i..j])``
    exhaustively (O(n^2) for one coordinate).  Agrees with
    ``pava(y).fitted[k]`` to within 1e-9; useful as an independent oracle.

    Parameters
    ----------
    y : array-like of shape (n,)
    k : int
        0-based coordinate index.
    """
    y = as_sequence(y, "y")
    n = y.shape[0]
    k = check_index(k, n, "k")
    prefix = np.concatenate(([0.0], np.cumsum(y)))
    i = np.arange(0, k + 1)
    j = np.arange(k, n)
    means = (prefix[j + 1][None, :] - prefix[i][:, None]) / (
        j[None, :] - i[:, None] + 1
    )
    return float(means.max(axis=0).min())


def neighbor_average(x, i) -> np.ndarray:
    """Replace entries ``i`` and ``i + 1`` of ``x`` by their common mean.

    Parameters
    ----------
    x : array-like of shape (n,)
    i : int
        0-based position of the left entry of the pair, 0 <= i <= n - 2.
    """
    x = as_sequence(x, "x")
    if x.shape[0] < 2:
        raise InvalidInput("x must have at least two entries")
    i = check_index(i, x.shape[0] - 1, "i")
    out = x.copy()
    mid = 0.5 * (out[i] + out[i + 1])
    out[i] = mid
    out[i + 1] = mid
    return out


@dataclass(frozen=True)
class SlowProjection:
    """Final iterate of the cyclic pairwise-averaging projection."""

    values: np.ndarray
    converged: bool
    sweeps: int


def slow_projection(x, max_sweeps: int = 10_000, tol: float = 1e-8) -> SlowProjection:
    """Iterate single-pair averaging cyclically until it reaches ``pava(x)``.

    Step t averages entries ``i_t`` and ``i_t + 1`` only when they violate
    the ordering, with ``i_t`` cycling through 0..n-2.  The iteration stops
    once the sup-norm distance to ``pava(x).fitted`` falls below ``tol``
    (checked after each full sweep) or after ``max_sweeps`` sweeps.
    Non-convergence within the budget is reported, not raised.

    Parameters
    ----------
    x : array-like of shape (n,), n >= 2
    max_sweeps : int
        Budget of full cycles over the n - 1 pairs.
    tol : float
        Sup-norm stopping tolerance.
    """
    x = as_sequence(x, "x")
    n = x.shape[0]
    if n < 2:
        raise InvalidInput("slow_projection needs n >= 2")
    max_sweeps = check_positive_int(max_sweeps, "max_sweeps")
    tol = check_positive(tol, "tol")
    target = pava(x).fitted
    current = x.copy()
    if float(np.max(np.abs(current - target))) < tol:
        return SlowProjection(values=current, converged=True, sweeps=0)
    for sweep in range(1, max_sweeps + 1):
        for i in range(n - 1):
            if current[i] > current[i + 1]:
                mid = 0.5 * (current[i] + current[i + 1])
                current[i] = mid
                current[i + 1] = mid
        if float(np.max(np.abs(current - target))) < tol:
            return SlowProjection(values=current, converged=True, sweeps=sweep)
    return SlowProjection(values=current, converged=False, sweeps=max_sweeps)
