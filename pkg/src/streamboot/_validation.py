"""Lightweight input checks shared across the package."""

from __future__ import annotations

import numpy as np

BETA_DEFAULT = float(np.sqrt(2.0) - 1.0)


def check_beta(beta: float) -> float:
    """Validate the autoregressive weight exponent.

    The admissible range is the open interval (0, 1/2); boundary values are
    rejected rather than clamped.
    """
    beta = float(beta)
    if not (0.0 < beta < 0.5):
        raise ValueError(
            f"beta must lie in the open interval (0, 0.5), got {beta!r}"
        )
    return beta


def check_level(level: float) -> float:
    level = float(level)
    if not (0.0 < level < 1.0):
        raise ValueError(f"level must lie in (0, 1), got {level!r}")
    return level


def check_step(t: int) -> int:
    t = int(t)
    if t < 1:
        raise ValueError(f"step index must be >= 1, got {t}")
    return t


def as_observation(x, dim: int | None = None) -> np.ndarray:
    """Coerce a single observation to a finite float64 vector.

    Scalars become 1-vectors. If ``dim`` is given, the length must match.
    """
    arr = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if arr.ndim != 1:
        raise ValueError(f"observation must be scalar or 1-d, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("observation contains non-finite values")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(
            f"observation has dimension {arr.shape[0]}, expected {dim}"
        )
    return arr


def as_observation_matrix(X) -> np.ndarray:
    """Coerce a batch of observations to a finite (n, d) float64 matrix.

    1-d input is treated as n univariate observations.
    """
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"expected 1-d or 2-d input, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("input contains non-finite values")
    return arr
