"""Local-adaptivity simulation harness.

Generates noisy observations of a piecewise-linear monotone test signal,
builds the data-adaptive confidence band per trial, and measures how mean
band widths over locally flat versus strictly increasing regions scale
with the sample size, plus empirical coverage.  All randomness flows from
explicit integer seeds so runs reproduce bit-for-bit.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validation import as_sequence, check_delta, check_nonnegative, check_positive_int
from .bands import Band, adaptive_band
from .exceptions import InvalidInput
from .isotonic import pava

#: t-intervals defining the locally constant ("flat") measurement regions.
FLAT_REGIONS = ((0.1, 0.2), (0.8, 0.9))
#: t-interval defining the strictly increasing measurement region.
INCREASING_REGION = (0.4, 0.6)

#: Slack used when testing whether the signal sits inside a band.
COVERAGE_SLACK = 1e-12


@dataclass(frozen=True)
class PiecewiseSignalSpec:
    """Nondecreasing piecewise-linear signal f on [0, 1].

    ``knots`` must start at 0, end at 1 and strictly increase; ``levels``
    are the (nondecreasing) values at the knots, interpolated linearly in
    between.
    """

    knots: np.ndarray
    levels: np.ndarray

    def __post_init__(self):
        knots = as_sequence(self.knots, "knots")
        levels = as_sequence(self.levels, "levels")
        if knots.shape != levels.shape or knots.shape[0] < 2:
            raise InvalidInput("knots and levels must match and have length >= 2")
        if knots[0] != 0.0 or knots[-1] != 1.0 or np.any(np.diff(knots) <= 0.0):
            raise InvalidInput("knots must strictly increase from 0 to 1")
        if np.any(np.diff(levels) < 0.0):
            raise InvalidInput("levels must be nondecreasing")
        knots.setflags(write=False)
        levels.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "levels", levels)

    def __call__(self, t):
        return np.interp(t, self.knots, self.levels)

    @classmethod
    def default(cls) -> "PiecewiseSignalSpec":
        """-10 on [0, 0.3], linear ramp to 10 on [0.3, 0.7], 10 on [0.7, 1]."""
        return cls(
            knots=np.array([0.0, 0.3, 0.7, 1.0]),
            levels=np.array([-10.0, -10.0, 10.0, 10.0]),
        )


def sample_signal(spec: PiecewiseSignalSpec, n: int) -> np.ndarray:
    """Signal values ``f(i / (n + 1))`` for i = 1..n (monotone by construction)."""
    n = check_positive_int(n, "n")
    return np.asarray(spec(np.arange(1, n + 1, dtype=np.float64) / (n + 1)))


def region_masks(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Boolean masks selecting indices whose t = i/(n+1) falls in each region."""
    t = np.arange(1, n + 1, dtype=np.float64) / (n + 1)
    flat = np.zeros(n, dtype=bool)
    for lo, hi in FLAT_REGIONS:
        flat |= (t >= lo) & (t <= hi)
    lo, hi = INCREASING_REGION
    increasing = (t >= lo) & (t <= hi)
    return flat, increasing


@dataclass(frozen=True)
class TrialResult:
    """One noisy trial: its band, coverage flag and region-mean widths."""

    n: int
    seed: int
    band: Band
    covered: bool
    mean_width_flat: float
    mean_width_increasing: float


def run_trial(spec: PiecewiseSignalSpec, n: int, sigma: float, delta: float,
              seed: int) -> TrialResult:
    """Sample the signal, add seeded Gaussian noise, build and assess the band.

    The band targets the signal itself (monotone, so no widening); coverage
    is whether the signal lies entirely inside the band up to a tiny slack.
    Region means are NaN when a region contains no indices (n < 20).
    """
    sigma = check_nonnegative(sigma, "sigma")
    delta = check_delta(delta)
    x = sample_signal(spec, n)
    rng = np.random.default_rng(seed)
    y = x + sigma * rng.standard_normal(n)
    band = adaptive_band(y, sigma, delta, eps_iso=0.0)
    width = band.width
    flat, increasing = region_masks(n)
    return TrialResult(
        n=n,
        seed=int(seed),
        band=band,
        covered=band.contains(x, slack=COVERAGE_SLACK),
        mean_width_flat=float(width[flat].mean()) if flat.any() else math.nan,
        mean_width_increasing=(
            float(width[increasing].mean()) if increasing.any() else math.nan
        ),
    )


def trial_seeds(root_seed: int, n: int, count: int) -> list[int]:
    """Deterministic per-trial seeds for sample size ``n``."""
    ss = np.random.SeedSequence([int(root_seed), int(n)])
    return [int(s) for s in ss.generate_state(count, dtype=np.uint64)]


def _run_many(tasks, worker, max_workers=None):
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(worker, tasks))
    return [worker(t) for t in tasks]


def run_trials_grid(spec: PiecewiseSignalSpec, n_values, sigma: float, delta: float,
                    trials_per_n: int, root_seed: int = 0,
                    max_workers: int | None = None) -> list[TrialResult]:
    """Run ``trials_per_n`` seeded trials at each sample size, ordered by (n, trial)."""
    n_values = [check_positive_int(n, "n") for n in n_values]
    trials_per_n = check_positive_int(trials_per_n, "trials_per_n")
    tasks = [
        (n, seed)
        for n in n_values
        for seed in trial_seeds(root_seed, n, trials_per_n)
    ]
    return _run_many(
        tasks, lambda t: run_trial(spec, t[0], sigma, delta, t[1]), max_workers
    )


@dataclass(frozen=True)
class SlopeReport:
    """Least-squares slope of log mean width against log(n / log n)."""

    region: str
    slope: float
    intercept: float
    n_range: tuple[int, int]


def log_width_slope(n_values, mean_widths) -> tuple[float, float]:
    """Regress log(mean width) on log(n / log n); returns (slope, intercept)."""
    n_arr = np.asarray(n_values, dtype=np.float64)
    w_arr = np.asarray(mean_widths, dtype=np.float64)
    if n_arr.shape != w_arr.shape or n_arr.size < 2:
        raise InvalidInput("need matching n_values and widths, at least two points")
    x = np.log(n_arr / np.log(n_arr))
    slope, intercept = np.polyfit(x, np.log(w_arr), 1)
    return float(slope), float(intercept)


def slope_experiment(spec: PiecewiseSignalSpec, n_values, sigma: float, delta: float,
                     trials_per_n: int, root_seed: int = 0,
                     max_workers: int | None = None) -> tuple[SlopeReport, SlopeReport]:
    """Width-scaling slopes for the flat and increasing regions.

    Averages region widths over trials at each n, regresses the log mean
    width on log(n / log n), and reports both slopes (around -1/2 flat,
    -1/3 increasing).  All n must be >= 100 so the regions are well inside
    the sequence.
    """
    n_values = list(n_values)
    if not n_values:
        raise InvalidInput("n_values must be nonempty")
    if any(int(n) < 100 for n in n_values):
        raise InvalidInput("slope experiment needs every n >= 100")
    trials = run_trials_grid(
        spec, n_values, sigma, delta, trials_per_n, root_seed, max_workers
    )
    flat_means = []
    inc_means = []
    for n in n_values:
        batch = [t for t in trials if t.n == n]
        flat_means.append(float(np.mean([t.mean_width_flat for t in batch])))
        inc_means.append(float(np.mean([t.mean_width_increasing for t in batch])))
    n_range = (int(min(n_values)), int(max(n_values)))
    fs, fi = log_width_slope(n_values, flat_means)
    xs, xi = log_width_slope(n_values, inc_means)
    return (
        SlopeReport(region="flat", slope=fs, intercept=fi, n_range=n_range),
        SlopeReport(region="increasing", slope=xs, intercept=xi, n_range=n_range),
    )


def coverage_shrink_factor(spec: PiecewiseSignalSpec, n: int, sigma: float,
                           delta: float, trials: int, factors,
                           root_seed: int = 0,
                           max_workers: int | None = None) -> list[tuple[float, float]]:
    """Empirical coverage after shrinking band half-widths about iso(y).

    Each trial's band is rescaled about its monotone fit by every factor in
    ``factors`` (subset of (0, 1]), reusing the same trials throughout, so
    coverage is nonincreasing as the factor decreases.
    """
    factors = [float(f) for f in factors]
    if not factors or any(not 0.0 < f <= 1.0 for f in factors):
        raise InvalidInput("factors must be a nonempty subset of (0, 1]")
    trials = check_positive_int(trials, "trials")
    x = sample_signal(spec, n)

    def one(seed):
        rng = np.random.default_rng(seed)
        y = x + sigma * rng.standard_normal(n)
        fitted = pava(y).fitted
        band = adaptive_band(y, sigma, delta, eps_iso=0.0)
        return [
            band.rescaled(fitted, f).contains(x, slack=COVERAGE_SLACK)
            for f in factors
        ]

    hits = _run_many(trial_seeds(root_seed, n, trials), one, max_workers)
    coverage = np.mean(np.asarray(hits, dtype=np.float64), axis=0)
    return list(zip(factors, (float(c) for c in coverage)))


def region_summary(trials: list[TrialResult]) -> list[dict]:
    """Per-(n, region) rows: mean width over trials and empirical coverage."""
    rows = []
    for n in sorted({t.n for t in trials}):
        batch = [t for t in trials if t.n == n]
        coverage = float(np.mean([t.covered for t in batch]))
        for region, attr in (
            ("flat", "mean_width_flat"),
            ("increasing", "mean_width_increasing"),
        ):
            rows.append(
                {
                    "n": n,
                    "region": region,
                    "mean_width": float(np.mean([getattr(t, attr) for t in batch])),
                    "coverage": coverage,
                }
            )
    return rows


def write_trials_json(trials: list[TrialResult], path) -> None:
    """One JSON record per trial (band envelopes omitted), one per line."""
    with open(path, "w") as fh:
        for t in trials:
            fh.write(
                json.dumps(
                    {
                        "n": t.n,
                        "seed": t.seed,
                        "covered": bool(t.covered),
                        "mean_width_flat": t.mean_width_flat,
                        "mean_width_increasing": t.mean_width_increasing,
                    }
                )
            )
            fh.write("\n")


def write_region_summary_csv(trials: list[TrialResult], path) -> None:
    """CSV summary with columns n, region, mean_width, coverage."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "region", "mean_width", "coverage"])
        for row in region_summary(trials):
            writer.writerow(
                [row["n"], row["region"], repr(row["mean_width"]), repr(row["coverage"])]
            )
