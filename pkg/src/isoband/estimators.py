"""Scikit-learn style estimator facade over the functional core.

These classes follow the usual conventions (hyperparameters in
``__init__``, data-dependent state in trailing-underscore attributes set
by ``fit``, ``get_params``/``set_params`` inherited) so the fits compose
with the wider ecosystem.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .bands import adaptive_band, estimate_sigma
from .density import grenander_band, grenander_fit
from .exceptions import InvalidInput
from .isotonic import pava


class IsotonicRegression(BaseEstimator):
    """Least-squares monotone fit of a single sequence.

    Attributes
    ----------
    fitted_ : ndarray
        Nondecreasing projection of the fitted sequence.
    blocks_ : tuple of (start, stop, level)
        Maximal constant runs (half-open 0-based ranges).
    df_ : int
        Number of distinct fitted values.
    """

    def fit(self, y):
        result = pava(y)
        self.result_ = result
        self.fitted_ = result.fitted
        self.blocks_ = result.blocks
        self.df_ = result.df
        return self

    def fit_transform(self, y):
        return self.fit(y).fitted_

    def transform(self, y):
        """Project a sequence onto the monotone cone (stateless)."""
        return pava(y).fitted


class ConfidenceBand(BaseEstimator):
    """Data-adaptive confidence band for a (nearly) monotone signal.

    Parameters
    ----------
    sigma : float or None
        Noise scale; estimated from the residuals when None.
    delta : float
        Miscoverage level in (0, 1).
    eps_iso : float
        Monotonicity defect of the target signal (0 when monotone).
    sigma_method : {"mle", "bias_corrected"}
        Estimator used when ``sigma`` is None.
    c1 : float
        Correction constant for the bias-corrected noise estimator.

    Attributes
    ----------
    fitted_ : ndarray
        Monotone fit of the observations.
    lower_, upper_ : ndarray
        Band envelopes.
    sigma_ : float
        Noise scale actually used.
    band_ : Band
        Full band object.
    """

    def __init__(self, sigma=None, delta=0.1, eps_iso=0.0,
                 sigma_method="mle", c1=1.5):
        self.sigma = sigma
        self.delta = delta
        self.eps_iso = eps_iso
        self.sigma_method = sigma_method
        self.c1 = c1

    def fit(self, y):
        if self.sigma is None:
            estimate = estimate_sigma(y, method=self.sigma_method, c1=self.c1)
            sigma = estimate.sigma_hat
            if sigma <= 0.0:
                raise InvalidInput(
                    "estimated noise scale is zero; pass sigma explicitly"
                )
        else:
            sigma = float(self.sigma)
        band = adaptive_band(y, sigma, self.delta, eps_iso=self.eps_iso)
        self.sigma_ = sigma
        self.fitted_ = pava(y).fitted
        self.lower_ = band.lower
        self.upper_ = band.upper
        self.band_ = band
        return self

    def contains(self, x, slack: float = 0.0) -> bool:
        check_is_fitted(self, "band_")
        return self.band_.contains(x, slack=slack)


class GrenanderDensity(BaseEstimator):
    """Monotone nonincreasing density estimate on [0, 1].

    Attributes
    ----------
    breakpoints_ : ndarray of shape (n + 1,)
    density_values_ : ndarray of shape (n,)
    estimate_ : GrenanderEstimate
    n_ : int
    """

    def fit(self, samples):
        estimate = grenander_fit(samples)
        self.estimate_ = estimate
        self.breakpoints_ = estimate.breakpoints
        self.density_values_ = estimate.density_values
        self.n_ = estimate.n
        return self

    def pdf(self, t):
        check_is_fitted(self, "estimate_")
        return self.estimate_.pdf(t)

    def cdf(self, t):
        check_is_fitted(self, "estimate_")
        return self.estimate_.cdf(t)

    def error_band(self, c: float, L: float, delta: float):
        """Uniform sup-error band at the fitted sample size."""
        check_is_fitted(self, "estimate_")
        return grenander_band(c, L, self.n_, delta)
