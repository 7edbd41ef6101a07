"""Finite-sample estimation bands for (nearly) monotone signals.

The deterministic backbone bounds each coordinate of one isotonic
projection by window means of another plus a slack proportional to the
sliding-window distance between the underlying vectors.  Substituting the
subgaussian high-probability bound for that distance yields data-adaptive
confidence bands whose width automatically tightens over locally flat
stretches of the signal, plus the symmetric signal-side error envelopes,
Lipschitz width bounds and an l2 risk bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import (
    as_sequence,
    check_delta,
    check_index,
    check_nonnegative,
    check_positive,
    check_positive_int,
)
from .exceptions import DegenerateFit, InvalidInput
from .isotonic import IsotonicFit, pava
from .norms import PsiSpec, sw_subgaussian_threshold

#: Band covers the isotonic projection of the signal.
TARGET_ISO = "iso_of_signal"
#: Band covers the signal itself (widened by its monotonicity defect).
TARGET_SIGNAL = "signal"


@dataclass(frozen=True)
class Band:
    """Per-index lower/upper envelopes with the parameters that built them.

    ``delta`` and ``sigma`` are None for purely deterministic bands.  The
    envelopes are not clipped against each other; :meth:`crossings` reports
    indices where they cross instead.
    """

    lower: np.ndarray
    upper: np.ndarray
    delta: float | None = None
    sigma: float | None = None
    eps_iso: float = 0.0
    target: str = TARGET_ISO

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x, slack: float = 0.0) -> bool:
        """Whether ``x`` lies inside the band at every index."""
        x = as_sequence(x, "x")
        if x.shape != self.lower.shape:
            raise InvalidInput("x must match the band length")
        return bool(
            np.all(x >= self.lower - slack) and np.all(x <= self.upper + slack)
        )

    def crossings(self) -> np.ndarray:
        """Indices where the lower envelope exceeds the upper one."""
        return np.flatnonzero(self.lower > self.upper)

    def rescaled(self, center, factor: float) -> "Band":
        """Shrink (or stretch) both half-widths about ``center`` by ``factor``."""
        center = as_sequence(center, "center")
        if center.shape != self.lower.shape:
            raise InvalidInput("center must match the band length")
        factor = check_positive(factor, "factor")
        return Band(
            lower=center - factor * (center - self.lower),
            upper=center + factor * (self.upper - center),
            delta=self.delta,
            sigma=self.sigma,
            eps_iso=self.eps_iso,
            target=self.target,
        )


@dataclass(frozen=True)
class NoiseEstimate:
    """Estimated noise scale, with the configuration that produced it."""

    sigma_hat: float
    method: str
    df_used: int | None
    c1: float


def eps_iso(x) -> float:
    """Smallest eps such that ``x[i] <= x[j] + eps`` for all i <= j.

    Zero exactly when ``x`` is nondecreasing; computed in O(n) as the max of
    (running prefix max - current value).
    """
    x = as_sequence(x, "x")
    return float(max(0.0, np.max(np.maximum.accumulate(x) - x)))


def _fitted_values(iso_fit) -> np.ndarray:
    if isinstance(iso_fit, IsotonicFit):
        return iso_fit.fitted
    return as_sequence(iso_fit, "fitted values")


def _window_envelope(values: np.ndarray, bound: float, psi: PsiSpec):
    # lower[k] = max over m of mean(values[k-m+1..k]) - bound / psi(m)
    # upper[k] = min over m of mean(values[k..k+m-1]) + bound / psi(m)
    n = values.shape[0]
    if len(psi) < n:
        raise InvalidInput(f"psi covers lengths 1..{len(psi)}, need {n}")
    prefix = np.concatenate(([0.0], np.cumsum(values)))
    # m = 1 windows are the values themselves; anchoring them exactly keeps
    # zero-slack bands degenerate at the fitted vector.
    slack1 = bound / psi.values[0]
    lower = values - slack1
    upper = values + slack1
    for m in range(2, n + 1):
        window_means = (prefix[m:] - prefix[:-m]) / m
        slack = bound / psi.values[m - 1]
        np.maximum(lower[m - 1 :], window_means - slack, out=lower[m - 1 :])
        np.minimum(upper[: n - m + 1], window_means + slack, out=upper[: n - m + 1])
    return lower, upper


def backbone_band_from_y(iso_y, sw_bound: float, psi: PsiSpec) -> Band:
    """Deterministic sandwich for ``iso(x)`` computed from ``iso(y)`` windows.

    Whenever ``sw_bound >= ||x - y||_SW`` (sliding-window norm under the
    same psi), the returned band contains ``iso(x)`` at every index:
    trailing window means of ``iso(y)`` minus ``sw_bound / psi(m)`` bound it
    from below, leading window means plus the slack bound it from above.

    Parameters
    ----------
    iso_y : IsotonicFit or array-like
        Isotonic projection of the observed vector.
    sw_bound : float
        Upper bound on the sliding-window distance between the two vectors.
    psi : PsiSpec
        Window weights; must cover lengths 1..n.
    """
    fitted = _fitted_values(iso_y)
    sw_bound = check_nonnegative(sw_bound, "sw_bound")
    lower, upper = _window_envelope(fitted, sw_bound, psi)
    return Band(lower=lower, upper=upper)


def backbone_band_from_x(iso_x, sw_bound: float, psi: PsiSpec) -> Band:
    """Deterministic sandwich for ``iso(y)`` computed from ``iso(x)`` windows.

    Same formula as :func:`backbone_band_from_y` with the roles of the two
    vectors exchanged.
    """
    return backbone_band_from_y(iso_x, sw_bound, psi)


def adaptive_band(y, sigma: float, delta: float, eps_iso: float = 0.0) -> Band:
    """Data-adaptive confidence band from observations alone.

    With probability at least ``1 - delta`` under independent zero-mean
    subgaussian noise of scale ``sigma``, the band contains the isotonic
    projection of the true signal at every index; if the signal is
    ``eps_iso``-monotone, widening both envelopes by ``eps_iso`` (done here
    when ``eps_iso > 0``) makes the band cover the signal itself.  Window
    weights are fixed to ``psi = sqrt``, which is what the subgaussian
    threshold is calibrated for.

    Parameters
    ----------
    y : array-like of shape (n,)
        Observed sequence.
    sigma : float
        Noise scale, >= 0 (zero collapses the band onto ``iso(y)``).
    delta : float
        Miscoverage level in (0, 1).
    eps_iso : float
        Monotonicity defect of the target signal; 0 when it is monotone.
    """
    y = as_sequence(y, "y")
    sigma = check_nonnegative(sigma, "sigma")
    delta = check_delta(delta)
    eps = check_nonnegative(eps_iso, "eps_iso")
    n = y.shape[0]
    bound = sw_subgaussian_threshold(n, sigma, delta)
    lower, upper = _window_envelope(pava(y).fitted, bound, PsiSpec.sqrt(n))
    if eps > 0.0:
        lower = lower - eps
        upper = upper + eps
    return Band(
        lower=lower,
        upper=upper,
        delta=delta,
        sigma=sigma,
        eps_iso=eps,
        target=TARGET_SIGNAL if eps > 0.0 else TARGET_ISO,
    )


def theoretical_error_envelope(
    x, sigma: float, delta: float, from_signal: bool = False, eps: float | None = None
):
    """Signal-side envelopes for the estimation error ``iso(y)_k - target_k``.

    With probability at least ``1 - delta``, ``neg[k] <= iso(y)_k - target_k
    <= pos[k]`` for all k, where the target is ``iso(x)`` by default.  With
    ``from_signal=True`` the envelopes are evaluated from the raw signal
    ``x`` and widened by its monotonicity defect (``eps``, computed from
    ``x`` when not given), so the target is ``x`` itself.

    Returns
    -------
    (neg, pos) : pair of ndarrays
        Per-index lower (typically negative) and upper deviations.
    """
    x = as_sequence(x, "x")
    sigma = check_nonnegative(sigma, "sigma")
    delta = check_delta(delta)
    n = x.shape[0]
    bound = sw_subgaussian_threshold(n, sigma, delta)
    base = x if from_signal else pava(x).fitted
    lower, upper = _window_envelope(base, bound, PsiSpec.sqrt(n))
    neg = lower - base
    pos = upper - base
    if from_signal:
        widen = eps_iso(x) if eps is None else check_nonnegative(eps, "eps")
        neg = neg - widen
        pos = pos + widen
    return neg, pos


@dataclass(frozen=True)
class LipschitzWidth:
    """Pointwise width bound for an L-Lipschitz monotone signal.

    ``width`` is the exact integer-scan minimum of
    ``L (m - 1) / (2 n) + sqrt(2 sigma^2 log((n^2 + n) / delta) / m)`` over
    admissible window sizes, attained at ``m`` (smallest minimizer on
    ties).  ``closed_form`` is the interior-index bound
    ``2 * cbrt(L sigma^2 log((n^2 + n) / delta) / n)`` with its prescribed
    window size ``m_closed``; both are None when ``L * sigma == 0`` (the
    closed form does not apply).
    """

    width: float
    m: int
    closed_form: float | None
    m_closed: int | None


def lipschitz_width(L: float, sigma: float, n: int, delta: float, k) -> LipschitzWidth:
    """Width bound at index ``k`` for an L-Lipschitz signal (|steps| <= L/n)."""
    L = check_nonnegative(L, "L")
    sigma = check_nonnegative(sigma, "sigma")
    n = check_positive_int(n, "n")
    delta = check_delta(delta)
    k = check_index(k, n, "k")
    threshold = sw_subgaussian_threshold(n, sigma, delta)
    m_max = min(k + 1, n - k)
    m_values = np.arange(1, m_max + 1, dtype=np.float64)
    widths = L * (m_values - 1.0) / (2.0 * n) + threshold / np.sqrt(m_values)
    best = int(np.argmin(widths))
    closed_form = None
    m_closed = None
    if L > 0.0 and sigma > 0.0:
        s2log = sigma * sigma * math.log((n * n + n) / delta)
        closed_form = 2.0 * (L * s2log / n) ** (1.0 / 3.0)
        m_closed = math.ceil((n * math.sqrt(s2log) / L) ** (2.0 / 3.0))
    return LipschitzWidth(
        width=float(widths[best]),
        m=best + 1,
        closed_form=closed_form,
        m_closed=m_closed,
    )


def l2_risk_bound(V: float, sigma: float, n: int) -> float:
    """Bound on ``E[(1/n) ||iso(y) - iso(x)||_2^2]`` for total variation V.

    ``48 (V sigma^2 log(2n) / n)^{2/3} + 96 sigma^2 log^2(2n) / n``; needs
    n >= 2.
    """
    V = check_nonnegative(V, "V")
    sigma = check_nonnegative(sigma, "sigma")
    n = check_positive_int(n, "n")
    if n < 2:
        raise InvalidInput("l2_risk_bound needs n >= 2")
    log2n = math.log(2.0 * n)
    var = sigma * sigma
    return 48.0 * (V * var * log2n / n) ** (2.0 / 3.0) + 96.0 * var * log2n * log2n / n


def estimate_sigma(y, method: str = "mle", c1: float = 1.5) -> NoiseEstimate:
    """Estimate the noise scale from the isotonic residuals.

    ``mle`` uses ``sigma^2 = (1/n) sum (y_i - iso(y)_i)^2``.
    ``bias_corrected`` divides the residual sum of squares by
    ``n - c1 * df`` instead, where ``df`` is the number of distinct fitted
    values; the correction constant ``c1`` is configuration (default 1.5,
    not validated here) and the denominator must stay positive.
    """
    y = as_sequence(y, "y")
    c1 = check_positive(c1, "c1")
    fit = pava(y)
    rss = float(np.sum((y - fit.fitted) ** 2))
    n = y.shape[0]
    if method == "mle":
        return NoiseEstimate(
            sigma_hat=math.sqrt(rss / n), method=method, df_used=None, c1=c1
        )
    if method == "bias_corrected":
        denom = n - c1 * fit.df
        if denom <= 0.0:
            raise DegenerateFit(
                f"n - c1 * df = {denom:g} <= 0: fit too flexible for this n"
            )
        return NoiseEstimate(
            sigma_hat=math.sqrt(rss / denom), method=method, df_used=fit.df, c1=c1
        )
    raise InvalidInput(f"method must be 'mle' or 'bias_corrected', got {method!r}")
