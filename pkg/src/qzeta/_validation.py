"""Input validation helpers shared by the estimator wrappers and the CLI."""

import math
import numbers

import numpy as np


def check_q(q):
    if not isinstance(q, numbers.Real) or not 0.0 < float(q) < 1.0:
        raise ValueError(f"q must be a real number in the open interval (0, 1), got {q!r}")
    return float(q)


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


def check_complex_array(X, n_columns):
    """Coerce ``X`` to a complex array of shape (n_samples, n_columns).

    Accepts complex input with ``n_columns`` columns (or 1-D when
    ``n_columns == 1``), or real input with twice as many columns holding
    (re, im) pairs.
    """
    X = np.asarray(X)
    if X.ndim == 1:
        if n_columns != 1:
            raise ValueError(f"expected a 2-D array with {n_columns} complex columns")
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {X.shape}")
    if X.shape[0] == 0:
        raise ValueError("found array with 0 samples")
    if np.iscomplexobj(X):
        if X.shape[1] != n_columns:
            raise ValueError(f"expected {n_columns} complex columns, got {X.shape[1]}")
        Z = X.astype(complex)
    else:
        X = X.astype(float)
        if X.shape[1] == n_columns:
            Z = X.astype(complex)
        elif X.shape[1] == 2 * n_columns:
            Z = X[:, 0::2] + 1j * X[:, 1::2]
        else:
            raise ValueError(
                f"expected {n_columns} complex or {2 * n_columns} real columns, got {X.shape[1]}"
            )
    if not np.all(np.isfinite(Z)):
        raise ValueError("input contains NaN or infinity")
    return Z


def check_v_values(v):
    v = np.asarray(v, dtype=float).ravel()
    if v.size == 0:
        raise ValueError("v grid is empty")
    if not np.all(np.isfinite(v)) or np.any(v <= 0) or np.any(np.diff(v) <= 0):
        raise ValueError("v grid must be finite, positive and strictly increasing")
    return v
