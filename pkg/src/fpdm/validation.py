"""Input checks shared by the estimators and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array


def check_valuations(X, n_buyers: int | None = None) -> np.ndarray:
    """Return ``X`` as a 2-D float array of valuations in ``[0, 1]``.

    A 1-D input is read as a single profile.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    X = check_array(X, dtype=np.float64, ensure_min_samples=1, ensure_min_features=0)
    if n_buyers is not None and X.shape[1] != n_buyers:
        raise ValueError(f"expected {n_buyers} valuation columns, got {X.shape[1]}")
    if X.size and (X.min() < 0.0 or X.max() > 1.0):
        raise ValueError("valuations must lie in [0, 1]")
    return X


def check_probability(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return value


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or int(value) != value or int(value) < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
