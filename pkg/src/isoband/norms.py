"""Sliding-window norm, norm property checking, and subgaussian bounds.

A norm is *nonincreasing under neighbor averaging* (NUNA) when replacing two
adjacent entries by their common mean never increases the norm.  NUNA is
exactly the condition under which isotonic projection is a contraction, so
this module pairs a batch NUNA checker with a constructive converse: from
any NUNA violation it builds an explicit pair of vectors whose projections
move apart under the norm.

The sliding-window norm ``max |mean(x[i..j])| * psi(j - i + 1)`` is the
NUNA norm used by all the confidence-band machinery; with ``psi = sqrt`` it
admits the subgaussian tail and moment bounds implemented here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from ._validation import (
    as_sequence,
    check_delta,
    check_index,
    check_nonnegative,
    check_positive_int,
)
from .exceptions import InvalidInput
from .isotonic import neighbor_average, pava

#: Slack used by the NUNA / contraction comparisons.
CHECK_TOL = 1e-12

#: Slack used by the discrete midpoint-concavity check on psi.
CONCAVITY_TOL = 1e-12


@dataclass(frozen=True)
class PsiSpec:
    """Tabulated window weights ``psi(1..n_max)``, all strictly positive.

    Only integer window lengths ever occur, so psi is stored as a table.
    Shape conditions (nondecreasing, ``m / psi(m)`` midpoint-concave) are
    checked separately via :func:`validate_psi`.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = as_sequence(self.values, "psi values")
        if np.any(arr <= 0.0):
            raise InvalidInput("psi values must be strictly positive")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __call__(self, length: int) -> float:
        """Weight for a window of ``length`` entries (1-based)."""
        if not 1 <= length <= len(self):
            raise InvalidInput(f"psi is tabulated for lengths 1..{len(self)}")
        return float(self.values[length - 1])

    @classmethod
    def sqrt(cls, n_max: int) -> "PsiSpec":
        n_max = check_positive_int(n_max, "n_max")
        return cls(np.sqrt(np.arange(1, n_max + 1, dtype=np.float64)))

    @classmethod
    def constant(cls, n_max: int, value: float = 1.0) -> "PsiSpec":
        n_max = check_positive_int(n_max, "n_max")
        return cls(np.full(n_max, float(value)))


@dataclass(frozen=True)
class PsiValidation:
    """Outcome of the psi shape checks (1-based indices, None = no violation)."""

    ok: bool
    monotone_violation: int | None
    concavity_violation: int | None


def validate_psi(psi: PsiSpec) -> PsiValidation:
    """Check that psi is nondecreasing and ``m / psi(m)`` is midpoint-concave.

    Returns the first violated index for each condition: for monotonicity
    the smallest length ``i`` with ``psi(i) > psi(i + 1)``; for concavity the
    smallest interior ``m`` with ``g(m-1) + g(m+1) > 2 g(m)`` beyond slack,
    where ``g(m) = m / psi(m)``.
    """
    v = psi.values
    mono = None
    worse = np.flatnonzero(v[:-1] > v[1:])
    if worse.size:
        mono = int(worse[0]) + 1
    conc = None
    if len(v) >= 3:
        g = np.arange(1, len(v) + 1, dtype=np.float64) / v
        bad = np.flatnonzero(g[:-2] + g[2:] > 2.0 * g[1:-1] + CONCAVITY_TOL)
        if bad.size:
            conc = int(bad[0]) + 2
    return PsiValidation(ok=mono is None and conc is None,
                         monotone_violation=mono, concavity_violation=conc)


def sliding_window_norm(x, psi: PsiSpec) -> float:
    """Max over all windows of ``|mean(x[i..j])| * psi(j - i + 1)``.

    Computed with prefix sums in O(n^2).  ``psi`` must cover window lengths
    1..n.
    """
    x = as_sequence(x, "x")
    n = x.shape[0]
    if len(psi) < n:
        raise InvalidInput(f"psi covers lengths 1..{len(psi)}, need {n}")
    prefix = np.concatenate(([0.0], np.cumsum(x)))
    best = float(np.max(np.abs(x))) * psi.values[0]
    for m in range(2, n + 1):
        window_max = float(np.max(np.abs(prefix[m:] - prefix[:-m]))) / m
        best = max(best, window_max * psi.values[m - 1])
    return best


def lp_norm(x, p) -> float:
    """Standard l_p norm for ``p`` in [1, inf]."""
    x = as_sequence(x, "x")
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise InvalidInput(f"p must be in [1, inf], got {p}")
    if math.isinf(p):
        return float(np.max(np.abs(x)))
    return float(np.sum(np.abs(x) ** p) ** (1.0 / p))


@dataclass(frozen=True)
class NormSpec:
    """An evaluable seminorm with a stable name.

    ``func`` maps a 1-D float array to a nonnegative real.  Seminorm axioms
    (homogeneity, triangle inequality) are not enforced at construction;
    :func:`check_seminorm_axioms` spot-checks them on samples.
    """

    name: str
    func: Callable[[np.ndarray], float] = field(repr=False)
    permutation_invariant: bool = False

    def __call__(self, x) -> float:
        return float(self.func(np.asarray(x, dtype=np.float64)))


@lru_cache(maxsize=None)
def _sqrt_psi(n: int) -> PsiSpec:
    return PsiSpec.sqrt(n)


def _sw_sqrt(x: np.ndarray) -> float:
    return sliding_window_norm(x, _sqrt_psi(int(x.shape[0])))


BUILTIN_NORMS: dict[str, NormSpec] = {
    "l1": NormSpec("l1", lambda x: lp_norm(x, 1), permutation_invariant=True),
    "l2": NormSpec("l2", lambda x: lp_norm(x, 2), permutation_invariant=True),
    "linf": NormSpec("linf", lambda x: lp_norm(x, math.inf), permutation_invariant=True),
    "sw-sqrt": NormSpec("sw-sqrt", _sw_sqrt),
    "first-coord": NormSpec("first-coord", lambda x: abs(float(x[0]))),
}


def builtin_norm(name: str) -> NormSpec:
    """Look up a registered norm by name."""
    try:
        return BUILTIN_NORMS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_NORMS))
        raise InvalidInput(f"unknown norm {name!r}; known: {known}") from None


@dataclass(frozen=True)
class NunaViolation:
    """A sample and pair index where neighbor averaging increased the norm."""

    x: np.ndarray
    i: int
    before: float
    after: float


@dataclass(frozen=True)
class ContractionWitness:
    """A pair whose isotonic projections move apart under the norm.

    ``lhs = ||iso(z) - iso(y)||`` strictly exceeds ``rhs = ||z - y||``.
    """

    y: np.ndarray
    z: np.ndarray
    lhs: float
    rhs: float


def check_nuna(norm: NormSpec, samples) -> NunaViolation | None:
    """Test ``||A_i x|| <= ||x||`` for every sample and every adjacent pair.

    Returns the first violation (by sample order, then pair index), or None
    when all checks pass within slack.
    """
    samples = list(samples)
    if not samples:
        raise InvalidInput("samples must be nonempty")
    for x in samples:
        x = as_sequence(x, "sample")
        before = norm(x)
        for i in range(x.shape[0] - 1):
            after = norm(neighbor_average(x, i))
            if after > before + CHECK_TOL:
                return NunaViolation(x=x, i=i, before=before, after=after)
    return None


def check_contraction(norm: NormSpec, pairs) -> ContractionWitness | None:
    """Test ``||iso(x) - iso(y)|| <= ||x - y||`` over the given pairs.

    Returns the first strict violation as a :class:`ContractionWitness`,
    or None when all pairs pass within slack.
    """
    pairs = list(pairs)
    if not pairs:
        raise InvalidInput("pairs must be nonempty")
    for a, b in pairs:
        a = as_sequence(a, "pair first")
        b = as_sequence(b, "pair second")
        if a.shape != b.shape:
            raise InvalidInput("pair members must have equal length")
        lhs = norm(pava(a).fitted - pava(b).fitted)
        rhs = norm(a - b)
        if lhs > rhs + CHECK_TOL:
            return ContractionWitness(y=a, z=b, lhs=lhs, rhs=rhs)
    return None


def build_counterexample(norm: NormSpec, x, i) -> ContractionWitness:
    """Construct a contraction violation from a NUNA violation.

    Given ``x`` with ``||A_i x|| > ||x||`` and ``x[i] <= x[i + 1]`` (negate
    ``x`` first if needed, see :func:`counterexample_from_nuna`), builds a
    pair ``(y, z = y + x)`` such that ``z`` is its own projection while the
    projection of ``y`` averages exactly the pair ``(i, i + 1)``, so that
    ``iso(z) - iso(y) = A_i x``.  The returned witness has
    ``lhs = ||A_i x|| > ||x|| = rhs``.
    """
    x = as_sequence(x, "x")
    n = x.shape[0]
    if n < 2:
        raise InvalidInput("x must have at least two entries")
    i = check_index(i, n - 1, "i")
    if x[i] > x[i + 1]:
        raise InvalidInput("need x[i] <= x[i + 1]; negate x first")
    averaged = neighbor_average(x, i)
    lhs = norm(averaged)
    rhs = norm(x)
    if lhs <= rhs:
        raise InvalidInput("need ||A_i x|| > ||x||: not a NUNA violation")
    big = float(np.max(np.abs(np.diff(x))))
    delta = float(x[i + 1] - x[i])
    y = np.empty(n, dtype=np.float64)
    y[: i + 1] = delta - big * np.arange(i, -1, -1, dtype=np.float64)
    y[i + 1 :] = big * np.arange(0, n - i - 1, dtype=np.float64)
    z = y + x
    iso_z = pava(z).fitted
    iso_y = pava(y).fitted
    if np.max(np.abs(iso_z - z)) > 1e-9:
        raise RuntimeError("internal check failed: z is not its own projection")
    if np.max(np.abs((iso_z - iso_y) - averaged)) > 1e-9:
        raise RuntimeError("internal check failed: iso(z) - iso(y) != A_i x")
    return ContractionWitness(y=y, z=z, lhs=lhs, rhs=rhs)


def counterexample_from_nuna(norm: NormSpec, violation: NunaViolation) -> ContractionWitness:
    """Orient a NUNA violation and feed it to :func:`build_counterexample`."""
    x = violation.x
    if x[violation.i] > x[violation.i + 1]:
        x = -x
    return build_counterexample(norm, x, violation.i)


def sw_subgaussian_threshold(n: int, sigma: float, delta: float) -> float:
    """High-probability bound on the sqrt-weighted sliding-window norm of noise.

    For independent zero-mean subgaussian noise with scale ``sigma``, the
    sliding-window norm of the noise vector (psi = sqrt) stays below
    ``sigma * sqrt(2 * log((n^2 + n) / delta))`` with probability >= 1 - delta.
    """
    n = check_positive_int(n, "n")
    sigma = check_nonnegative(sigma, "sigma")
    delta = check_delta(delta)
    return sigma * math.sqrt(2.0 * math.log((n * n + n) / delta))


def sw_expectation_bounds(n: int, sigma: float) -> tuple[float, float]:
    """Mean and second-moment bounds for the sliding-window norm of noise.

    Returns ``(sigma * sqrt(2 log(n^2 + n)), 8 sigma^2 log(n^2 + n))``.
    """
    n = check_positive_int(n, "n")
    sigma = check_nonnegative(sigma, "sigma")
    log_term = math.log(n * n + n)
    return sigma * math.sqrt(2.0 * log_term), 8.0 * sigma * sigma * log_term


def default_nuna_samples(rng=None, sizes=(2, 3, 5, 10, 50), gaussian_per_size: int = 1000):
    """Default sample battery for :func:`check_nuna`.

    Gaussian vectors at each size plus structured vectors (alternating +-1
    and single spikes); violations of natural norms show up at tiny n.
    """
    rng = np.random.default_rng(rng)
    samples: list[np.ndarray] = []
    for n in sizes:
        signs = np.ones(n)
        signs[1::2] = -1.0
        samples.append(signs)
        for k in range(n):
            spike = np.zeros(n)
            spike[k] = 1.0
            samples.append(spike)
        samples.extend(rng.standard_normal((gaussian_per_size, n)))
    return samples


def default_contraction_pairs(rng=None, sizes=(2, 5, 20, 100), pairs_per_size: int = 250):
    """Random Gaussian pairs for :func:`check_contraction`."""
    rng = np.random.default_rng(rng)
    pairs: list[tuple[np.ndarray, np.ndarray]] = []
    for n in sizes:
        for _ in range(pairs_per_size):
            pairs.append((rng.standard_normal(n), rng.standard_normal(n)))
    return pairs


def check_seminorm_axioms(norm: NormSpec, samples, rng=None, rel_tol: float = 1e-9) -> str | None:
    """Spot-check homogeneity and the triangle inequality on samples.

    Returns a description of the first violation, or None.
    """
    rng = np.random.default_rng(rng)
    samples = [as_sequence(s, "sample") for s in samples]
    if not samples:
        raise InvalidInput("samples must be nonempty")
    for x in samples:
        scale = float(rng.uniform(-3.0, 3.0))
        lhs = norm(scale * x)
        rhs = abs(scale) * norm(x)
        if abs(lhs - rhs) > rel_tol * max(1.0, abs(rhs)):
            return f"homogeneity failed: ||{scale} x|| = {lhs}, |{scale}| ||x|| = {rhs}"
    for x, y in zip(samples, samples[1:]):
        if x.shape != y.shape:
            continue
        lhs = norm(x + y)
        rhs = norm(x) + norm(y)
        if lhs > rhs + rel_tol * max(1.0, rhs):
            return f"triangle inequality failed: ||x + y|| = {lhs} > {rhs}"
    return None
