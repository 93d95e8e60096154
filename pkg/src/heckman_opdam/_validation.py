"""Input checks shared by the estimators and the command line."""

from __future__ import annotations

import numbers

import numpy as np


def check_points(Z, rank: int, allow_complex: bool = False, name: str = "points") -> np.ndarray:
    """Return ``Z`` as a finite ``(n, rank)`` array; a single point becomes one row."""
    dtype = complex if allow_complex else float
    try:
        arr = np.asarray(Z, dtype=dtype)
    except TypeError as exc:
        raise ValueError(f"{name} must be numeric{' (complex allowed)' if allow_complex else ''}") from exc
    if arr.ndim == 1 and arr.shape[0] == rank:
        arr = arr[None, :]
    if arr.ndim == 1 and rank == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[1] != rank:
        raise ValueError(f"{name} must have shape (n, {rank}), got {np.shape(Z)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contain non-finite values")
    return arr


def check_samples(X, n_nodes: int, name: str = "X") -> np.ndarray:
    """Return samples as a complex ``(n_functions, n_nodes)`` array."""
    arr = np.asarray(X, dtype=complex)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != n_nodes:
        raise ValueError(f"{name} must have {n_nodes} samples per row (one per grid node), got shape {np.shape(X)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_time(t, allow_zero: bool = False, name: str = "t") -> float:
    if not isinstance(t, numbers.Real) or not np.isfinite(t):
        raise ValueError(f"{name} must be a finite real number")
    if t < 0 or (t == 0 and not allow_zero):
        raise ValueError(f"{name} must be {'nonnegative' if allow_zero else 'positive'}, got {t}")
    return float(t)


def check_positive(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not value > 0 or not np.isfinite(value):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)
