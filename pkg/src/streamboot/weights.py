"""Multiplier-weight processes for online bootstrap resampling.

Three weight schemes are provided:

* an autoregressive Gaussian process whose serial correlation grows with the
  step index (``rho``, ``ar_next``), updateable in O(1) per step;
* iid Gaussian weights with unit mean and variance (``iid_next``);
* blockwise moving-average weights built by convolving iid Gamma innovations
  with a triangular kernel (``block_regenerate``), which must be regenerated
  wholesale every time the block size changes.

All schemes produce weights with mean 1 whose variance is (asymptotically)
1, as required for multiplier resampling of sample averages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import BETA_DEFAULT, check_beta, check_step

__all__ = [
    "BETA_DEFAULT",
    "ArWeightState",
    "BlockWeightVector",
    "ar_next",
    "ar_weight_cov",
    "block_gamma_shape",
    "block_kernel",
    "block_regenerate",
    "block_size",
    "chain_generator",
    "iid_next",
    "rho",
]


def rho(t, beta: float = BETA_DEFAULT):
    """Serial correlation of the autoregressive weight recursion at step ``t``.

    Equals ``1 - t**(-beta)``: zero at the first step and increasing towards
    one, so weights become more persistent as the stream grows.

    Parameters
    ----------
    t : int or array of int
        Step index, >= 1.
    beta : float
        Exponent in the open interval (0, 0.5).
    """
    beta = check_beta(beta)
    t_arr = np.asarray(t)
    if np.any(t_arr < 1):
        raise ValueError("step index must be >= 1")
    out = 1.0 - np.asarray(t_arr, dtype=np.float64) ** (-beta)
    return float(out) if np.isscalar(t) or t_arr.ndim == 0 else out


@dataclass(frozen=True)
class ArWeightState:
    """State of one autoregressive weight chain: step index and current value."""

    t: int = 0
    v: float = 0.0

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("step index must be >= 0")


def ar_next(state: ArWeightState, zeta: float, beta: float = BETA_DEFAULT) -> ArWeightState:
    """Advance an autoregressive weight chain by one step.

    The recursion is ``v <- 1 + rho(t+1) * (v - 1) + sqrt(1 - rho(t+1)^2) * zeta``
    starting from ``v = 0`` at ``t = 0``. At the first step the correlation is
    zero, so the first weight is ``1 + zeta`` and each weight is marginally
    N(1, 1) thereafter.
    """
    t_next = check_step(state.t + 1)
    r = rho(t_next, beta)
    v = 1.0 + r * (state.v - 1.0) + np.sqrt(1.0 - r * r) * zeta
    return ArWeightState(t=t_next, v=float(v))


def ar_weight_cov(i: int, h: int, beta: float = BETA_DEFAULT) -> float:
    """Closed-form covariance of autoregressive weights at steps ``i`` and ``i+h``.

    Equals ``prod_{k=1..h} (1 - (i+k)**(-beta))``; 1 for ``h = 0``,
    nonincreasing in ``h`` and nondecreasing in ``i``, always within [0, 1].
    """
    beta = check_beta(beta)
    i = check_step(i)
    h = int(h)
    if h < 0:
        raise ValueError("lag must be >= 0")
    if h == 0:
        return 1.0
    ks = np.arange(1, h + 1, dtype=np.float64)
    return float(np.prod(1.0 - (i + ks) ** (-beta)))


def iid_next(zeta):
    """One iid Gaussian multiplier weight: ``1 + zeta`` with ``zeta ~ N(0, 1)``."""
    return 1.0 + zeta


def block_size(n: int) -> int:
    """Block half-width for a stream of length ``n``: ``floor(n**(1/3))``, >= 1.

    Uses an exact integer cube root so cube boundaries land precisely.
    """
    n = check_step(n)
    m = int(round(n ** (1.0 / 3.0)))
    while m > 1 and m * m * m > n:
        m -= 1
    while (m + 1) ** 3 <= n:
        m += 1
    return max(m, 1)


def block_gamma_shape(m: int) -> float:
    """Shape (= rate) of the Gamma innovations for block half-width ``m``.

    Chosen so the convolved weights have variance tending to one as ``m``
    grows. Well below 1 for moderate ``m`` (0.07 at ``m = 10``), so the Gamma
    sampler must handle small shapes.
    """
    m = check_step(m)
    q = 2.0 / (3.0 * m) + 1.0 / (3.0 * m * m)
    if q <= 0.0:
        raise ValueError(f"gamma shape must be positive, got {q}")
    return q


def block_kernel(m: int) -> np.ndarray:
    """Triangular smoothing kernel ``b_j = (1 - |j|/m) / m`` for ``|j| <= m``."""
    m = check_step(m)
    j = np.arange(-m, m + 1, dtype=np.float64)
    return (1.0 - np.abs(j) / m) / m


@dataclass(frozen=True)
class BlockWeightVector:
    """A full multiplier-weight vector for a stream of length ``n``.

    Regenerated wholesale whenever the block size changes; ``m_used`` records
    the half-width the weights were generated with.
    """

    n: int
    weights: np.ndarray
    m_used: int


def block_regenerate(n: int, m: int, innovations: np.ndarray) -> BlockWeightVector:
    """Build the blockwise weights for positions 1..n from Gamma innovations.

    ``innovations`` must hold the draws for time indices -m..n+m (length
    ``n + 2m + 1``), each distributed Gamma(q, q) with ``q =
    block_gamma_shape(m)``. The weight at position ``i`` is the kernel-weighted
    sum of innovations ``i-m..i+m``, a full O(n*m) recomputation by design.
    """
    n = check_step(n)
    m = check_step(m)
    z = np.asarray(innovations, dtype=np.float64)
    expected = n + 2 * m + 1
    if z.shape != (expected,):
        raise ValueError(
            f"need {expected} innovations for n={n}, m={m}, got shape {z.shape}"
        )
    block_gamma_shape(m)
    kern = block_kernel(m)
    # Valid convolution yields positions 0..n; position 0 is discarded.
    w = np.convolve(z, kern, mode="valid")[1:]
    return BlockWeightVector(n=n, weights=w, m_used=m)


def chain_generator(master_entropy, chain_index: int) -> np.random.Generator:
    """Independent, reproducible random stream for one bootstrap chain.

    Streams are derived from (master entropy, chain index) via
    ``numpy.random.SeedSequence`` so parallel chains never share generator
    state and any chain's draws can be reproduced in isolation.
    """
    seq = np.random.SeedSequence(entropy=master_entropy, spawn_key=(int(chain_index),))
    return np.random.Generator(np.random.PCG64(seq))
