"""Online bootstrap ensembles over streaming data.

The central object is :class:`OnlineBootstrap`, a scikit-learn style
estimator that maintains ``B`` multiplier-bootstrap chains alongside the
running data mean. Each chain carries a weight process, the running sum of
its weights and a weighted running average of the observations; one update
costs O(B * d) for the autoregressive and iid weight schemes, independent of
how much data has been seen. The blockwise scheme deliberately retains the
full data prefix and regenerates all weights whenever the block size grows.

Summaries (variance of the rescaled replicates, percentile confidence
intervals, replicate quantiles) are produced on demand from the chain states.
"""

from __future__ import annotations

import base64
import math
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import (
    BETA_DEFAULT,
    as_observation,
    as_observation_matrix,
    check_beta,
    check_level,
)
from .weights import block_gamma_shape, block_kernel, block_size, chain_generator

__all__ = [
    "HistoryBudgetError",
    "OnlineBootstrap",
    "UncertaintySummary",
    "interpolated_quantiles",
]

_CHUNK = 1024
_SNAPSHOT_FORMAT = "streamboot-ensemble"
_SNAPSHOT_VERSION = 1


class HistoryBudgetError(RuntimeError):
    """Raised when the blockwise scheme outgrows its configured history cap."""


def interpolated_quantiles(values: np.ndarray, probs) -> np.ndarray:
    """Empirical quantiles by linear interpolation of order statistics.

    The quantile at probability ``p`` sits at (1-indexed) position
    ``p * (B + 1)``, clamped to [1, B], interpolating linearly between the
    adjacent order statistics. Stated explicitly because quantile conventions
    differ between libraries.

    Parameters
    ----------
    values : array, shape (B,) or (B, d)
        Replicate values; quantiles are taken along the first axis.
    probs : iterable of float in (0, 1)

    Returns
    -------
    array of shape (len(probs),) or (len(probs), d)
    """
    values = np.asarray(values, dtype=np.float64)
    probs = np.atleast_1d(np.asarray(probs, dtype=np.float64))
    if probs.size == 0:
        raise ValueError("probs must be nonempty")
    if np.any((probs <= 0.0) | (probs >= 1.0)):
        raise ValueError("probabilities must lie strictly inside (0, 1)")
    n = values.shape[0]
    if n < 1:
        raise ValueError("need at least one replicate")
    srt = np.sort(values, axis=0)
    pos = np.clip(probs * (n + 1), 1.0, float(n))
    lo = np.floor(pos).astype(int)
    frac = pos - lo
    hi = np.minimum(lo + 1, n)
    if values.ndim == 1:
        return srt[lo - 1] * (1.0 - frac) + srt[hi - 1] * frac
    return srt[lo - 1] * (1.0 - frac)[:, None] + srt[hi - 1] * frac[:, None]


@dataclass(frozen=True)
class UncertaintySummary:
    """Uncertainty report for the running average at the current step.

    ``ci_lower <= ci_upper`` componentwise; ``variance_est`` is the
    per-coordinate estimate of the long-run variance (None when fewer than
    two observations or chains are available).
    """

    level: float
    center: np.ndarray
    ci_lower: np.ndarray
    ci_upper: np.ndarray
    quantiles: dict
    variance_est: np.ndarray | None


def _encode_array(a: np.ndarray) -> dict:
    a = np.ascontiguousarray(a, dtype=np.float64)
    return {
        "shape": list(a.shape),
        "data": base64.b64encode(a.tobytes()).decode("ascii"),
    }


def _decode_array(d: dict) -> np.ndarray:
    raw = base64.b64decode(d["data"])
    return np.frombuffer(raw, dtype=np.float64).reshape(d["shape"]).copy()


def _rng_state_to_json(state: dict) -> dict:
    # PCG64 state dicts contain plain ints; pass through.
    return {
        "bit_generator": state["bit_generator"],
        "state": {k: int(v) for k, v in state["state"].items()},
        "has_uint32": int(state["has_uint32"]),
        "uinteger": int(state["uinteger"]),
    }


class _NormalChunks:
    """Per-chain standard-normal streams, drawn in chunks for throughput.

    Chain ``b`` consumes exactly the sequence its own generator would produce
    one value at a time; chunking only batches the draws. The state at the
    last chunk boundary is retained so a snapshot can resume bit-identically.
    """

    def __init__(self, master_entropy, n_chains: int, chunk: int = _CHUNK):
        self._gens = [chain_generator(master_entropy, b) for b in range(n_chains)]
        self._n = n_chains
        self._chunk = chunk
        self._buf = np.empty((chunk, n_chains))
        self._pos = chunk
        self._fill_states = [g.bit_generator.state for g in self._gens]

    def next_row(self) -> np.ndarray:
        if self._pos == self._chunk:
            self._fill()
        row = self._buf[self._pos]
        self._pos += 1
        return row

    def _fill(self):
        self._fill_states = [g.bit_generator.state for g in self._gens]
        for b, g in enumerate(self._gens):
            self._buf[:, b] = g.standard_normal(self._chunk)
        self._pos = 0

    def state_dict(self) -> dict:
        return {
            "chunk": self._chunk,
            "pos": self._pos,
            "fill_states": [_rng_state_to_json(s) for s in self._fill_states],
        }

    def load_state_dict(self, d: dict):
        if d["chunk"] != self._chunk or len(d["fill_states"]) != self._n:
            raise ValueError("snapshot chunk layout does not match ensemble")
        for g, s in zip(self._gens, d["fill_states"]):
            g.bit_generator.state = s
        if d["pos"] < self._chunk:
            self._fill()
        self._pos = d["pos"]

    def nbytes(self) -> int:
        return self._buf.nbytes


class _ArDriver:
    """Autoregressive Gaussian weights, one O(B) step per observation."""

    def __init__(self, master_entropy, n_chains: int, beta: float):
        self._neg_beta = -beta
        self._chunks = _NormalChunks(master_entropy, n_chains)
        self.v = np.zeros(n_chains)
        self._tmp = np.empty(n_chains)

    def step(self, t: int) -> np.ndarray:
        z = self._chunks.next_row()
        r = 1.0 - t ** self._neg_beta
        s = math.sqrt(1.0 - r * r)
        v = self.v
        np.multiply(v, r, out=v)
        v += 1.0 - r
        np.multiply(z, s, out=self._tmp)
        v += self._tmp
        return v

    def state_dict(self) -> dict:
        return {"v": _encode_array(self.v), "rng": self._chunks.state_dict()}

    def load_state_dict(self, d: dict):
        self.v[:] = _decode_array(d["v"])
        self._chunks.load_state_dict(d["rng"])

    def nbytes(self) -> int:
        return self.v.nbytes + self._tmp.nbytes + self._chunks.nbytes()


class _IidDriver:
    """Independent N(1, 1) weights."""

    def __init__(self, master_entropy, n_chains: int):
        self._chunks = _NormalChunks(master_entropy, n_chains)
        self.v = np.zeros(n_chains)

    def step(self, t: int) -> np.ndarray:
        np.add(self._chunks.next_row(), 1.0, out=self.v)
        return self.v

    def state_dict(self) -> dict:
        return {"v": _encode_array(self.v), "rng": self._chunks.state_dict()}

    def load_state_dict(self, d: dict):
        self.v[:] = _decode_array(d["v"])
        self._chunks.load_state_dict(d["rng"])

    def nbytes(self) -> int:
        return self.v.nbytes + self._chunks.nbytes()


class _BlockDriver:
    """Blockwise moving-average Gamma weights with full regeneration.

    Weights for the whole constant-block-size window are precomputed at each
    regeneration (every time ``block_size(t)`` grows, i.e. at perfect cubes);
    in between, a step just consumes the next precomputed weight. Each
    regeneration draws all innovations afresh, chain by chain, and triggers a
    from-scratch recomputation of the ensemble's averages.
    """

    def __init__(self, master_entropy, n_chains: int):
        self._gens = [chain_generator(master_entropy, b) for b in range(n_chains)]
        self._n = n_chains
        self.m = 0
        self.regen_count = 0
        self._window = np.empty((n_chains, 0))  # weights for positions 1..w_end

    def step(self, t: int):
        m = block_size(t)
        if m == self.m:
            return self._window[:, t - 1], None
        self.m = m
        w_end = (m + 1) ** 3 - 1
        q = block_gamma_shape(m)
        scale = 1.0 / q
        kern = block_kernel(m)
        length = w_end + 2 * m + 1  # innovations for times -m..w_end+m
        window = np.empty((self._n, w_end))
        for b, g in enumerate(self._gens):
            innov = g.gamma(q, scale, size=length)
            window[b] = np.convolve(innov, kern, mode="valid")[1:]
        self._window = window
        self.regen_count += 1
        return window[:, t - 1], window[:, :t]

    def realized_weights(self, t: int) -> np.ndarray:
        return self._window[:, :t].copy()

    def state_dict(self) -> dict:
        return {
            "m": self.m,
            "regen_count": self.regen_count,
            "window": _encode_array(self._window),
            "gen_states": [
                _rng_state_to_json(g.bit_generator.state) for g in self._gens
            ],
        }

    def load_state_dict(self, d: dict):
        self.m = d["m"]
        self.regen_count = d["regen_count"]
        self._window = _decode_array(d["window"])
        for g, s in zip(self._gens, d["gen_states"]):
            g.bit_generator.state = s

    def nbytes(self) -> int:
        return self._window.nbytes


_METHODS = ("ar", "iid", "block")


class OnlineBootstrap(BaseEstimator):
    """Streaming uncertainty quantification for running averages.

    Maintains ``n_chains`` multiplier-bootstrap replicates of the running
    mean of a (possibly dependent) data stream. After each observation every
    chain ``b`` holds a weighted running average, and the spread of those
    replicate averages around the data mean estimates the sampling
    uncertainty of the mean itself.

    Parameters
    ----------
    method : {"ar", "iid", "block"}
        Weight scheme. "ar" (autoregressive Gaussian weights, valid for
        dependent streams, O(1) per update) is the default. "iid" is the
        classical multiplier bootstrap, valid only for independent data.
        "block" is the moving-average multiplier block bootstrap; it retains
        the entire stream and regenerates all weights whenever the block
        size grows, which is why it does not scale to long streams.
    n_chains : int
        Number of bootstrap replicates B. May be 0, in which case only the
        running mean is tracked and summaries raise.
    beta : float
        Correlation growth exponent for the "ar" method, inside (0, 0.5).
        The default sqrt(2) - 1 minimizes the asymptotic mean-squared error
        of the variance estimate.
    level : float
        Default confidence level for `confidence_interval`.
    random_state : int, sequence of int, or None
        Master seed. Each chain derives its own independent substream from
        (seed, chain index). None draws fresh OS entropy.
    history_cap : int or None
        Maximum number of observations the "block" method may retain;
        exceeding it raises :class:`HistoryBudgetError`. None means
        unbounded. Ignored by "ar" and "iid", which keep O(1) state.
    record_weights : bool
        Keep all realized weights for offline verification (memory grows
        with the stream; testing aid, not for production streams).

    Notes
    -----
    Observations are strictly sequential: the estimator is not safe for
    concurrent ``observe`` calls. Chains are mutually independent given the
    shared datum and are updated in fixed index order, so summaries are
    bit-reproducible for a given seed.

    Examples
    --------
    >>> est = OnlineBootstrap(method="ar", n_chains=100, random_state=7)
    >>> est = est.fit([0.3, -1.2, 0.8, 0.1, -0.4])
    >>> summary = est.confidence_interval(level=0.9)
    >>> bool(summary.ci_lower[0] <= summary.center[0] <= summary.ci_upper[0])
    True
    """

    def __init__(
        self,
        method: str = "ar",
        n_chains: int = 250,
        beta: float = BETA_DEFAULT,
        level: float = 0.9,
        random_state=None,
        history_cap: int | None = None,
        record_weights: bool = False,
    ):
        self.method = method
        self.n_chains = n_chains
        self.beta = beta
        self.level = level
        self.random_state = random_state
        self.history_cap = history_cap
        self.record_weights = record_weights

    # -- lifecycle -----------------------------------------------------

    def _reset(self):
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        if self.method == "ar":
            check_beta(self.beta)
        check_level(self.level)
        if int(self.n_chains) < 0:
            raise ValueError("n_chains must be >= 0")
        if self.random_state is None:
            self._entropy = np.random.SeedSequence().entropy
        else:
            self._entropy = self.random_state
        B = int(self.n_chains)
        if self.method == "ar":
            self._driver = _ArDriver(self._entropy, B, float(self.beta))
        elif self.method == "iid":
            self._driver = _IidDriver(self._entropy, B)
        else:
            self._driver = _BlockDriver(self._entropy, B)
        self._is_block = self.method == "block"
        self._t = 0
        self._dim = None
        self._record = [] if (self.record_weights and not self._is_block) else None
        self._history = None

    def _ensure_dim(self, d: int):
        if self._dim is not None:
            return
        B = int(self.n_chains)
        self._dim = d
        self.n_features_in_ = d
        self._xbar = np.zeros(d)
        self._S = np.zeros(B)
        self._xs = np.zeros((B, d))
        self._num = np.empty((B, d))
        self._tmp_b = np.empty(B)
        # flat views for the univariate fast path (same memory)
        self._xs_f = self._xs[:, 0]
        self._num_f = self._num[:, 0]
        if self._is_block:
            self._history = np.empty((256, d))

    @property
    def _initialized(self) -> bool:
        return hasattr(self, "_t")

    # -- updating ------------------------------------------------------

    def fit(self, X, y=None):
        """Reset state and stream all rows of ``X`` in order."""
        self._reset()
        return self.partial_fit(X)

    def partial_fit(self, X, y=None):
        """Stream all rows of ``X`` in order without resetting prior state."""
        if not self._initialized:
            self._reset()
        X = as_observation_matrix(X)
        if self._dim is not None and X.shape[1] != self._dim:
            raise ValueError(
                f"input has dimension {X.shape[1]}, ensemble tracks {self._dim}"
            )
        self._ensure_dim(X.shape[1])
        if self._dim == 1:
            for x in X[:, 0]:
                self._observe_scalar(x)
        else:
            for row in X:
                self._observe_vector(row)
        return self

    def observe(self, x):
        """Process a single observation (scalar or length-d vector)."""
        if not self._initialized:
            self._reset()
        if isinstance(x, (float, int)) and not isinstance(x, bool):
            if self._dim is None:
                self._ensure_dim(1)
            if self._dim == 1:
                if not math.isfinite(x):
                    raise ValueError("observation contains non-finite values")
                self._observe_scalar(float(x))
                return self
            raise ValueError(f"observation has dimension 1, expected {self._dim}")
        x = as_observation(x, self._dim)
        self._ensure_dim(x.shape[0])
        if self._dim == 1:
            self._observe_scalar(float(x[0]))
        else:
            self._observe_vector(x)
        return self

    def _observe_scalar(self, x: float):
        t = self._t + 1
        if self._is_block:
            self._append_history_scalar(x, t)
            v, full = self._driver.step(t)
            if full is not None:
                self._recompute_from(full, t)
                v = None
        else:
            v = self._driver.step(t)
        if v is not None:
            S = self._S
            num = self._num_f
            tmp = self._tmp_b
            xs = self._xs_f
            np.multiply(S, xs, out=num)
            np.multiply(v, x, out=tmp)
            num += tmp
            S += v
            np.divide(num, S, out=xs)
            if self._record is not None:
                self._record.append(v.copy())
        inv = 1.0 / t
        self._xbar[0] = (1.0 - inv) * self._xbar[0] + x * inv
        self._t = t

    def _observe_vector(self, x: np.ndarray):
        t = self._t + 1
        if self._is_block:
            self._append_history_vector(x, t)
            v, full = self._driver.step(t)
            if full is not None:
                self._recompute_from(full, t)
                v = None
        else:
            v = self._driver.step(t)
        if v is not None:
            S = self._S
            np.multiply(S[:, None], self._xs, out=self._num)
            self._num += v[:, None] * x
            S += v
            np.divide(self._num, S[:, None], out=self._xs)
            if self._record is not None:
                self._record.append(v.copy())
        inv = 1.0 / t
        np.multiply(self._xbar, 1.0 - inv, out=self._xbar)
        self._xbar += x * inv
        self._t = t

    def _recompute_from(self, weights: np.ndarray, t: int):
        # From-scratch recomputation over the retained prefix; the chain
        # recursion resumes from these values afterwards.
        self._S[:] = weights.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            # one matrix-vector product per coordinate, so a d-dimensional run
            # reproduces d univariate runs bit for bit
            for j in range(self._dim):
                np.divide(weights @ self._history[:t, j], self._S, out=self._xs[:, j])

    def _grow_history(self, t: int):
        if self.history_cap is not None and t > int(self.history_cap):
            raise HistoryBudgetError(
                f"block method would retain {t} observations, cap is "
                f"{self.history_cap}; the blockwise scheme is O(n) in memory"
            )
        if t > self._history.shape[0]:
            grown = np.empty((2 * self._history.shape[0], self._history.shape[1]))
            grown[: self._t] = self._history[: self._t]
            self._history = grown

    def _append_history_scalar(self, x: float, t: int):
        self._grow_history(t)
        self._history[t - 1, 0] = x

    def _append_history_vector(self, x: np.ndarray, t: int):
        self._grow_history(t)
        self._history[t - 1] = x

    # -- fitted state --------------------------------------------------

    def _require_data(self):
        if not self._initialized or self._t == 0:
            raise ValueError("no observations seen yet")

    @property
    def t_(self) -> int:
        self._require_data()
        return self._t

    @property
    def mean_(self) -> np.ndarray:
        """Running mean of the data stream, shape (d,)."""
        self._require_data()
        return self._xbar.copy()

    @property
    def replicate_means_(self) -> np.ndarray:
        """Per-chain weighted running averages, shape (B, d)."""
        self._require_data()
        return self._xs.copy()

    @property
    def weight_means_(self) -> np.ndarray:
        """Per-chain running mean of the weights, shape (B,)."""
        self._require_data()
        return self._S / self._t

    @property
    def regen_count_(self) -> int:
        """Number of full weight regenerations (block method; else 0)."""
        self._require_data()
        return getattr(self._driver, "regen_count", 0)

    def realized_weights(self) -> np.ndarray:
        """All realized weights so far, shape (B, t).

        For the block method these are always available (they are the
        current regenerated window); for "ar"/"iid" the estimator must have
        been constructed with ``record_weights=True``.
        """
        self._require_data()
        if self._is_block:
            return self._driver.realized_weights(self._t)
        if self._record is None:
            raise ValueError("construct with record_weights=True to keep weights")
        return np.stack(self._record, axis=1)

    def state_nbytes(self) -> int:
        """Bytes retained in chain state (excludes block history by design)."""
        self._require_data()
        total = self._S.nbytes + self._xs.nbytes + self._num.nbytes
        total += self._xbar.nbytes + self._driver.nbytes()
        return total

    # -- summaries -----------------------------------------------------

    def _valid_replicates(self) -> np.ndarray:
        if int(self.n_chains) == 0:
            raise ValueError("no chains: ensemble was configured with n_chains=0")
        mask = np.isfinite(self._xs).all(axis=1)
        return self._xs[mask]

    def variance_estimate(self) -> np.ndarray:
        """Per-coordinate estimate of the long-run variance of the stream.

        The sample variance, across chains, of ``sqrt(t) * (replicate mean -
        data mean)``; as a sample variance it is centered, so identical
        chains give exactly zero and adding a constant to every observation
        leaves the estimate unchanged.
        """
        self._require_data()
        if self._t < 2:
            raise ValueError("variance estimate needs at least 2 observations")
        reps = self._valid_replicates()
        if reps.shape[0] < 2:
            raise ValueError("variance estimate needs at least 2 usable chains")
        rescaled = reps - self._xbar
        centered = rescaled - rescaled.mean(axis=0)
        return self._t * np.sum(centered * centered, axis=0) / (reps.shape[0] - 1)

    def quantiles(self, probs) -> dict:
        """Interpolated empirical quantiles of the replicate means.

        Returns a dict mapping each probability to a (d,) vector.
        """
        self._require_data()
        reps = self._valid_replicates()
        if reps.shape[0] < 1:
            raise ValueError("no usable chains")
        probs = [float(p) for p in np.atleast_1d(probs)]
        vals = interpolated_quantiles(reps, probs)
        return {p: vals[i] for i, p in enumerate(probs)}

    def confidence_interval(self, level: float | None = None, transform=None) -> UncertaintySummary:
        """Percentile confidence interval for the (transformed) mean.

        Parameters
        ----------
        level : float in (0, 1), optional
            Nominal coverage; defaults to the constructor's ``level``.
        transform : None, "identity", "log", or callable
            Smooth map applied to the (B, d) matrix of replicate means and to
            the data mean before taking percentiles. A callable must accept
            and return a 2-d array. Non-finite transformed replicates raise.
        """
        self._require_data()
        level = check_level(self.level if level is None else level)
        reps = self._valid_replicates()
        if reps.shape[0] < 2:
            raise ValueError("confidence interval needs at least 2 usable chains")
        fn = _resolve_transform(transform)
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.asarray(fn(reps), dtype=np.float64)
        if r.ndim == 1:
            r = r[:, None]
        if not np.all(np.isfinite(r)):
            raise ValueError("transform produced non-finite replicate values")
        center = np.asarray(fn(self._xbar[None, :]), dtype=np.float64).reshape(-1)
        lo_p = (1.0 - level) / 2.0
        hi_p = (1.0 + level) / 2.0
        qs = interpolated_quantiles(r, [lo_p, hi_p])
        try:
            var = self.variance_estimate()
        except ValueError:
            var = None
        return UncertaintySummary(
            level=level,
            center=center,
            ci_lower=qs[0],
            ci_upper=qs[1],
            quantiles={lo_p: qs[0], hi_p: qs[1]},
            variance_est=var,
        )

    # -- snapshot / resume ----------------------------------------------

    def snapshot(self) -> dict:
        """JSON-serializable state capture enabling bit-identical resume."""
        if not self._initialized:
            raise ValueError("nothing to snapshot: estimator not started")
        if self._record is not None:
            raise ValueError("snapshots of recording ensembles are not supported")
        snap = {
            "format": _SNAPSHOT_FORMAT,
            "version": _SNAPSHOT_VERSION,
            "params": {
                "method": self.method,
                "n_chains": int(self.n_chains),
                "beta": float(self.beta),
                "level": float(self.level),
                "history_cap": self.history_cap,
            },
            "entropy": _entropy_to_json(self._entropy),
            "t": self._t,
            "dim": self._dim,
            "driver": self._driver.state_dict(),
        }
        if self._dim is not None:
            snap["xbar"] = _encode_array(self._xbar)
            snap["S"] = _encode_array(self._S)
            snap["xs"] = _encode_array(self._xs)
        if self._is_block and self._history is not None:
            snap["history"] = _encode_array(self._history[: self._t])
        return snap

    @classmethod
    def from_snapshot(cls, snap: dict) -> "OnlineBootstrap":
        """Rebuild an ensemble from :meth:`snapshot` output."""
        if snap.get("format") != _SNAPSHOT_FORMAT:
            raise ValueError("not an ensemble snapshot")
        if snap.get("version") != _SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {snap.get('version')!r}")
        p = snap["params"]
        est = cls(
            method=p["method"],
            n_chains=p["n_chains"],
            beta=p["beta"],
            level=p["level"],
            history_cap=p["history_cap"],
            random_state=_entropy_from_json(snap["entropy"]),
        )
        est._reset()
        est._t = snap["t"]
        if snap["dim"] is not None:
            est._ensure_dim(snap["dim"])
            est._xbar[:] = _decode_array(snap["xbar"])
            est._S[:] = _decode_array(snap["S"])
            est._xs[:] = _decode_array(snap["xs"])
            if p["method"] == "block" and "history" in snap:
                hist = _decode_array(snap["history"])
                size = max(256, int(2 ** np.ceil(np.log2(max(hist.shape[0], 1)))))
                est._history = np.empty((size, snap["dim"]))
                est._history[: hist.shape[0]] = hist
        est._driver.load_state_dict(snap["driver"])
        return est


def _resolve_transform(transform):
    if transform is None or transform == "identity":
        return lambda a: a
    if transform == "log":
        return np.log
    if callable(transform):
        return transform
    raise ValueError(f"unknown transform {transform!r}")


def _entropy_to_json(entropy):
    if isinstance(entropy, (int, np.integer)):
        return int(entropy)
    return [int(e) for e in entropy]


def _entropy_from_json(entropy):
    if isinstance(entropy, list):
        return tuple(entropy)
    return entropy
