"""Independent brute-force oracles and sampling utilities for the tests.

Everything here is deliberately written the slow, obvious way so it never
shares code paths with the implementations it checks.
"""
import numpy as np

# nonincreasing linear test density g(t) = 1.5 - t on [0, 1]
LINEAR_C = 0.5
LINEAR_L = 1.0


def linear_density(t):
    return 1.5 - np.asarray(t, dtype=np.float64)


def linear_density_ppf(u):
    # invert G(t) = 1.5 t - t^2 / 2 in closed form
    return (3.0 - np.sqrt(9.0 - 8.0 * np.asarray(u, dtype=np.float64))) / 2.0


def sorted_uniforms(n, rng):
    """Order statistics of n iid uniforms via exponential spacings (no sort)."""
    gaps = rng.standard_exponential(n + 1)
    total = np.cumsum(gaps)
    return total[:n] / total[n]


def sorted_linear_samples(n, rng):
    """Sorted draws from the linear test density, allocation-lean for huge n."""
    gaps = rng.standard_exponential(n + 1)
    np.cumsum(gaps, out=gaps)
    total = float(gaps[n])
    u = gaps[:n]
    u /= total
    # in-place quantile transform: (3 - sqrt(9 - 8 u)) / 2
    u *= -8.0
    u += 9.0
    np.sqrt(u, out=u)
    u *= -0.5
    u += 1.5
    return u


def sw_norm_brute(x, psi_fn):
    """Double-loop sliding-window norm."""
    x = np.asarray(x, dtype=np.float64)
    best = 0.0
    for i in range(len(x)):
        for j in range(i, len(x)):
            mean = float(np.mean(x[i : j + 1]))
            best = max(best, abs(mean) * psi_fn(j - i + 1))
    return best


def window_envelope_brute(values, bound, psi_fn):
    """Double-loop version of the window-mean envelopes."""
    values = np.asarray(values, dtype=np.float64)
    n = len(values)
    lower = np.empty(n)
    upper = np.empty(n)
    for k in range(n):
        lo = -np.inf
        for m in range(1, k + 2):
            lo = max(lo, float(np.mean(values[k - m + 1 : k + 1])) - bound / psi_fn(m))
        hi = np.inf
        for m in range(1, n - k + 1):
            hi = min(hi, float(np.mean(values[k : k + m])) + bound / psi_fn(m))
        lower[k] = lo
        upper[k] = hi
    return lower, upper


def eps_iso_brute(x):
    x = np.asarray(x, dtype=np.float64)
    worst = 0.0
    for i in range(len(x)):
        for j in range(i, len(x)):
            worst = max(worst, float(x[i] - x[j]))
    return worst


def random_monotone(rng, n, scale=1.0):
    steps = np.abs(rng.standard_normal(n)) * scale
    return rng.standard_normal() + np.cumsum(steps)


def upper_concave_majorant(xs, ys):
    """Vertices of the least concave majorant of points (xs, ys).

    Monotone-chain upper hull; xs must be strictly increasing.
    Returns (hull_x, hull_y).
    """
    points = list(zip(xs, ys))
    hull = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point when it lies on or below the chord
            if (x2 - x1) * (p[1] - y1) >= (p[0] - x1) * (y2 - y1):
                hull.pop()
            else:
                break
        hull.append(p)
    hx, hy = zip(*hull)
    return np.asarray(hx), np.asarray(hy)


def eval_piecewise_linear(hx, hy, t):
    return np.interp(t, hx, hy)
