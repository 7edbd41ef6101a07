import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from isoband import (
    InvalidInput,
    minmax_iso,
    neighbor_average,
    pava,
    slow_projection,
)

from helpers import random_monotone

finite_arrays = hnp.arrays(
    np.float64,
    hnp.array_shapes(min_dims=1, max_dims=1, min_side=1, max_side=30),
    elements=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
)


class TestPava:
    def test_already_monotone_is_identity(self):
        fit = pava([1.0, 2.0, 3.0])
        assert np.array_equal(fit.fitted, [1.0, 2.0, 3.0])
        assert fit.df == 3

    def test_single_violating_pair_is_averaged(self):
        fit = pava([2.0, 1.0])
        assert np.array_equal(fit.fitted, [1.5, 1.5])
        assert fit.df == 1
        assert fit.blocks == ((0, 2, 1.5),)

    def test_three_point_pool(self):
        # frozen from the min-max oracle: min_{j>=k} max_{i<=k} mean(y[i..j])
        fit = pava([3.0, 1.0, 2.0])
        assert np.allclose(fit.fitted, [2.0, 2.0, 2.0], atol=1e-12)
        assert fit.df == 1

    def test_rejects_bad_input(self):
        with pytest.raises(InvalidInput):
            pava([])
        with pytest.raises(InvalidInput):
            pava([1.0, np.nan])
        with pytest.raises(InvalidInput):
            pava([1.0, np.inf])
        with pytest.raises(InvalidInput):
            pava([[1.0, 2.0]])

    def test_tied_block_levels_report_as_one_run(self):
        # two pooled blocks land on the same level; df counts distinct values
        fit = pava([1.0, -1.0, 1.0, -1.0])
        assert np.array_equal(fit.fitted, [0.0, 0.0, 0.0, 0.0])
        assert fit.blocks == ((0, 4, 0.0),)
        assert fit.df == 1

    def test_blocks_partition_and_levels(self, rng):
        for _ in range(50):
            y = rng.standard_normal(rng.integers(1, 30))
            fit = pava(y)
            assert fit.blocks[0][0] == 0
            assert fit.blocks[-1][1] == len(y)
            for (s1, e1, l1), (s2, e2, l2) in zip(fit.blocks, fit.blocks[1:]):
                assert e1 == s2
                assert l1 < l2
            for s, e, level in fit.blocks:
                assert np.all(fit.fitted[s:e] == level)
                assert abs(level - y[s:e].mean()) < 1e-9
            assert fit.df == len(fit.blocks) == len(np.unique(fit.fitted))

    def test_idempotent_exactly(self, rng):
        for _ in range(50):
            y = rng.standard_normal(rng.integers(1, 40))
            once = pava(y).fitted
            assert np.array_equal(pava(once).fitted, once)

    def test_mean_preserved(self, rng):
        for _ in range(50):
            y = rng.standard_normal(rng.integers(1, 40))
            assert abs(pava(y).fitted.mean() - y.mean()) < 1e-12

    def test_matches_minmax_oracle(self, rng):
        for _ in range(300):
            y = rng.standard_normal(rng.integers(1, 13))
            fitted = pava(y).fitted
            for k in range(len(y)):
                assert abs(fitted[k] - minmax_iso(y, k)) <= 1e-9

    def test_l2_optimal_among_monotone_candidates(self, rng):
        for _ in range(20):
            y = rng.standard_normal(rng.integers(1, 9))
            best = np.linalg.norm(y - pava(y).fitted)
            for _ in range(1000):
                z = random_monotone(rng, len(y))
                assert best <= np.linalg.norm(y - z) + 1e-12

    def test_matches_sklearn(self, rng):
        from sklearn.isotonic import isotonic_regression

        for _ in range(100):
            y = rng.standard_normal(rng.integers(1, 60))
            assert np.allclose(pava(y).fitted, isotonic_regression(y), atol=1e-9)

    def test_single_step_averaging_is_invisible(self, rng):
        # averaging a violating pair never changes the projection
        for _ in range(200):
            x = rng.standard_normal(rng.integers(2, 15))
            violations = [i for i in range(len(x) - 1) if x[i] > x[i + 1]]
            if not violations:
                continue
            i = violations[rng.integers(len(violations))]
            assert np.allclose(
                pava(neighbor_average(x, i)).fitted, pava(x).fitted, atol=1e-9
            )

    @settings(max_examples=60, deadline=None)
    @given(finite_arrays)
    def test_fitted_monotone_and_idempotent(self, y):
        fit = pava(y)
        assert np.all(np.diff(fit.fitted) >= 0.0)
        assert np.array_equal(pava(fit.fitted).fitted, fit.fitted)
        assert abs(fit.fitted.mean() - y.mean()) <= 1e-7 * max(1.0, np.abs(y).max())


class TestMinmax:
    @pytest.mark.parametrize(
        "y, k, expected",
        [
            ([3.0, 1.0, 2.0], 0, 2.0),
            ([1.0, 2.0], 1, 2.0),
            ([2.0, 1.0], 0, 1.5),
        ],
    )
    def test_examples(self, y, k, expected):
        assert minmax_iso(y, k) == pytest.approx(expected, abs=1e-12)

    def test_index_out_of_range(self):
        with pytest.raises(InvalidInput):
            minmax_iso([1.0, 2.0], 2)
        with pytest.raises(InvalidInput):
            minmax_iso([1.0, 2.0], -1)


class TestNeighborAverage:
    def test_examples(self):
        assert np.array_equal(neighbor_average([0.0, 2.0, 5.0], 0), [1.0, 1.0, 5.0])
        assert np.array_equal(neighbor_average([7.0, 7.0], 0), [7.0, 7.0])
        assert np.array_equal(
            neighbor_average([1.0, -1.0, 4.0, 0.0], 2), [1.0, -1.0, 2.0, 2.0]
        )

    def test_index_out_of_range(self):
        with pytest.raises(InvalidInput):
            neighbor_average([1.0, 2.0], 1)
        with pytest.raises(InvalidInput):
            neighbor_average([1.0], 0)


class TestSlowProjection:
    def test_monotone_input_is_fixed_point(self):
        x = [1.0, 2.0, 3.0]
        result = slow_projection(x, max_sweeps=5, tol=1e-10)
        assert result.converged
        assert result.sweeps == 0
        assert np.array_equal(result.values, x)

    def test_single_pair_one_sweep(self):
        result = slow_projection([2.0, 1.0], max_sweeps=1, tol=1e-10)
        assert result.converged
        assert result.sweeps == 1
        assert np.array_equal(result.values, [1.5, 1.5])

    def test_three_point_limit(self):
        result = slow_projection([3.0, 1.0, 2.0], max_sweeps=200, tol=1e-8)
        assert result.converged
        assert np.max(np.abs(result.values - 2.0)) < 1e-8

    def test_reports_non_convergence(self):
        result = slow_projection(np.linspace(5.0, 0.0, 20), max_sweeps=1, tol=1e-10)
        assert not result.converged
        assert result.sweeps == 1

    def test_converges_to_pava_on_random_inputs(self, rng):
        for n in (3, 8, 25, 50):
            for _ in range(5):
                x = rng.standard_normal(n)
                result = slow_projection(x, max_sweeps=20_000, tol=1e-8)
                assert result.converged, f"did not converge at n={n}"
                assert np.max(np.abs(result.values - pava(x).fitted)) < 1e-8

    def test_needs_two_entries(self):
        with pytest.raises(InvalidInput):
            slow_projection([1.0])
