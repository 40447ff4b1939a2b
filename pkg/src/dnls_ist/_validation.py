"""Input checks for the estimator interface.

scikit-learn's ``check_array`` rejects complex input, so potentials and
reflection data are validated here instead.
"""
from __future__ import annotations

import numpy as np

from .errors import DataError, GridMismatchError


def check_complex_rows(X, n_features=None, name="X") -> np.ndarray:
    """Return ``X`` as a finite 2-D complex array, one sample per row.

    A 1-D input is treated as a single sample.
    """
    arr = np.asarray(X)
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.number):
        raise DataError(f"{name} must be numeric, got dtype {arr.dtype}")
    arr = np.atleast_2d(arr.astype(complex, copy=False))
    if arr.ndim != 2:
        raise DataError(f"{name} must be 1-D or 2-D, got {arr.ndim} dimensions")
    if arr.shape[0] == 0:
        raise DataError(f"{name} has no samples")
    if not np.all(np.isfinite(arr)):
        raise DataError(f"{name} contains NaN or infinity")
    if n_features is not None and arr.shape[1] != n_features:
        raise GridMismatchError(
            f"{name} has {arr.shape[1]} columns, expected {n_features}")
    return arr


def check_power_of_two(n: int, name="n") -> int:
    n = int(n)
    if n <= 0 or n & (n - 1):
        raise DataError(f"{name} must be a power of two, got {n}")
    return n


def check_positive(value, name) -> float:
    value = float(value)
    if not value > 0:
        raise DataError(f"{name} must be positive, got {value}")
    return value


def check_edge_decay(arr: np.ndarray, tol: float, name="X") -> None:
    edge = np.maximum(np.abs(arr[:, 0]), np.abs(arr[:, -1]))
    bad = np.flatnonzero(edge >= tol)
    if bad.size:
        raise DataError(f"{name}: sample {bad[0]} has |q| = {edge[bad[0]]:.2e} "
                        f"at the boundary (limit {tol:.0e})")
