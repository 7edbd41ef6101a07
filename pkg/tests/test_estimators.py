import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from isoband import (
    ConfidenceBand,
    GrenanderDensity,
    InvalidInput,
    IsotonicRegression,
    adaptive_band,
    estimate_sigma,
    grenander_fit,
    pava,
)


class TestIsotonicRegression:
    def test_fit_matches_functional_core(self, rng):
        y = rng.standard_normal(25)
        est = IsotonicRegression().fit(y)
        fit = pava(y)
        assert np.array_equal(est.fitted_, fit.fitted)
        assert est.blocks_ == fit.blocks
        assert est.df_ == fit.df

    def test_fit_transform_and_stateless_transform(self, rng):
        y = rng.standard_normal(10)
        est = IsotonicRegression()
        assert np.array_equal(est.fit_transform(y), pava(y).fitted)
        other = rng.standard_normal(7)
        assert np.array_equal(est.transform(other), pava(other).fitted)

    def test_sklearn_protocol(self):
        est = IsotonicRegression()
        assert est.get_params() == {}
        assert isinstance(clone(est), IsotonicRegression)


class TestConfidenceBand:
    def test_explicit_sigma_matches_adaptive_band(self, rng):
        y = rng.standard_normal(60)
        est = ConfidenceBand(sigma=1.0, delta=0.1).fit(y)
        band = adaptive_band(y, 1.0, 0.1)
        assert np.array_equal(est.lower_, band.lower)
        assert np.array_equal(est.upper_, band.upper)
        assert est.sigma_ == 1.0
        assert np.array_equal(est.fitted_, pava(y).fitted)

    def test_sigma_estimated_when_omitted(self, rng):
        y = np.linspace(0.0, 3.0, 40) + 0.5 * rng.standard_normal(40)
        est = ConfidenceBand(delta=0.1).fit(y)
        assert est.sigma_ == pytest.approx(estimate_sigma(y).sigma_hat)
        assert est.band_.sigma == pytest.approx(est.sigma_)

    def test_monotone_data_needs_explicit_sigma(self):
        with pytest.raises(InvalidInput):
            ConfidenceBand().fit(np.arange(5.0))

    def test_contains_requires_fit(self, rng):
        est = ConfidenceBand(sigma=1.0)
        with pytest.raises(NotFittedError):
            est.contains(rng.standard_normal(5))

    def test_params_round_trip(self):
        est = ConfidenceBand(sigma=2.0, delta=0.05, eps_iso=0.1, c1=2.0)
        params = est.get_params()
        assert params["sigma"] == 2.0
        assert params["delta"] == 0.05
        rebuilt = ConfidenceBand(**params)
        assert rebuilt.get_params() == params
        assert isinstance(clone(est), ConfidenceBand)


class TestGrenanderDensity:
    def test_fit_matches_functional_core(self, rng):
        samples = rng.random(40)
        est = GrenanderDensity().fit(samples)
        reference = grenander_fit(samples)
        assert np.array_equal(est.breakpoints_, reference.breakpoints)
        assert np.array_equal(est.density_values_, reference.density_values)
        assert est.n_ == 40
        grid = np.linspace(0.0, 1.0, 101)
        assert np.array_equal(est.pdf(grid), reference.pdf(grid))
        assert np.array_equal(est.cdf(grid), reference.cdf(grid))

    def test_error_band_uses_fitted_size(self, rng):
        est = GrenanderDensity().fit(rng.random(100))
        band = est.error_band(c=1.0, L=0.0, delta=0.1)
        assert band.margin_delta > 0.0

    def test_requires_fit(self):
        est = GrenanderDensity()
        with pytest.raises(NotFittedError):
            est.pdf(0.5)
