"""Input validation helpers shared across the package."""
from __future__ import annotations

import numbers

import numpy as np

from .exceptions import InvalidInput


def as_sequence(values, name: str = "values") -> np.ndarray:
    """Coerce to a finite 1-D float64 array of length >= 1."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInput(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise InvalidInput(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{name} must contain only finite values")
    return arr


def check_index(k, n: int, name: str = "index") -> int:
    """Validate a 0-based index into a length-n sequence."""
    if not isinstance(k, numbers.Integral):
        raise InvalidInput(f"{name} must be an integer, got {k!r}")
    k = int(k)
    if not 0 <= k < n:
        raise InvalidInput(f"{name} must be in [0, {n - 1}], got {k}")
    return k


def check_delta(delta, name: str = "delta") -> float:
    """Validate a miscoverage level in the open interval (0, 1)."""
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise InvalidInput(f"{name} must lie in (0, 1), got {delta}")
    return delta


def check_nonnegative(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0.0:
        raise InvalidInput(f"{name} must be finite and >= 0, got {value}")
    return value


def check_positive(value, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise InvalidInput(f"{name} must be finite and > 0, got {value}")
    return value


def check_positive_int(value, name: str) -> int:
    if not isinstance(value, numbers.Integral) or int(value) < 1:
        raise InvalidInput(f"{name} must be a positive integer, got {value!r}")
    return int(value)
