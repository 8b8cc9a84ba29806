"""Synthetic dependent data streams and their ground-truth targets.

Five scenarios are available, mirroring progressively harder dependence:

* ``ma0``: iid Gaussian noise (moving average of order 0),
* ``ma2`` / ``ma20``: short- and medium-range moving averages with
  coefficients ``2**-j``,
* ``logmeanexp``: streams ``exp(X_i)`` of an ma2 process and targets the
  log of the running mean (a smooth transform of the average),
* ``ma2garch``: a moving average driven by GARCH(1, 1) innovations
  (volatility clustering; uncorrelated but dependent noise).

Each scenario exposes the true mean of its statistic and a long-run variance
target, either in closed form (pure moving averages) or through the Monte
Carlo oracle :func:`sigma_inf_mc`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GarchParams",
    "MaParams",
    "MonteCarloEstimate",
    "Scenario",
    "SCENARIO_TAGS",
    "GarchStream",
    "MovingAverageStream",
    "default_ma_thetas",
    "make_scenario",
    "ma_autocovariance",
    "oracle_sigma_inf",
    "scenario_stream",
    "sigma_inf_ma",
    "sigma_inf_mc",
    "true_mean",
]

SCENARIO_TAGS = ("ma0", "ma2", "ma20", "logmeanexp", "ma2garch")


def default_ma_thetas(q: int) -> tuple:
    """Geometric moving-average coefficients ``theta_j = 2**-j``."""
    return tuple(2.0 ** -j for j in range(1, q + 1))


@dataclass(frozen=True)
class MaParams:
    """Moving average of order ``q`` over iid standard normal innovations."""

    q: int
    thetas: tuple = ()
    mu: float = 0.0

    def __post_init__(self):
        if self.q < 0:
            raise ValueError("order must be >= 0")
        if len(self.thetas) != self.q:
            raise ValueError(
                f"need {self.q} coefficients, got {len(self.thetas)}"
            )


@dataclass(frozen=True)
class GarchParams:
    """Order-2 moving average over GARCH(1, 1) innovations.

    ``alpha1 + beta1 < 1`` is required for covariance stationarity; the
    defaults sit well inside that region.
    """

    theta1: float = 0.5
    theta2: float = 0.25
    alpha0: float = 0.2
    alpha1: float = 0.1
    beta1: float = 0.6
    mu: float = 0.0

    def __post_init__(self):
        if self.alpha0 <= 0.0:
            raise ValueError("alpha0 must be > 0")
        if self.alpha1 < 0.0 or self.beta1 < 0.0:
            raise ValueError("alpha1 and beta1 must be >= 0")
        if self.alpha1 + self.beta1 >= 1.0:
            raise ValueError(
                "nonstationary parameters: alpha1 + beta1 must be < 1, got "
                f"{self.alpha1 + self.beta1}"
            )

    @property
    def unconditional_variance(self) -> float:
        return self.alpha0 / (1.0 - self.alpha1 - self.beta1)


@dataclass(frozen=True)
class Scenario:
    """A data-generating process plus the statistic tracked on it.

    ``transform`` is "identity" for plain running means and "log" when the
    statistic is the log of the running mean (applied to confidence
    intervals via the bootstrap replicates).
    """

    tag: str
    kind: str  # "ma" or "garch"
    ma: MaParams | None = None
    garch: GarchParams | None = None
    transform: str = "identity"
    exponentiate: bool = False  # stream exp(X) instead of X

    def to_dict(self) -> dict:
        d = {"tag": self.tag, "kind": self.kind, "transform": self.transform,
             "exponentiate": self.exponentiate}
        if self.ma is not None:
            d["ma"] = {"q": self.ma.q, "thetas": list(self.ma.thetas), "mu": self.ma.mu}
        if self.garch is not None:
            g = self.garch
            d["garch"] = {
                "theta1": g.theta1, "theta2": g.theta2, "alpha0": g.alpha0,
                "alpha1": g.alpha1, "beta1": g.beta1, "mu": g.mu,
            }
        return d


def make_scenario(tag: str, mu: float = 0.0) -> Scenario:
    """Build one of the named scenarios (every parameter fixed and explicit)."""
    tag = tag.lower()
    if tag == "ma0":
        return Scenario(tag, "ma", ma=MaParams(0, (), mu))
    if tag == "ma2":
        return Scenario(tag, "ma", ma=MaParams(2, default_ma_thetas(2), mu))
    if tag == "ma20":
        return Scenario(tag, "ma", ma=MaParams(20, default_ma_thetas(20), mu))
    if tag == "logmeanexp":
        return Scenario(
            tag, "ma", ma=MaParams(2, default_ma_thetas(2), mu),
            transform="log", exponentiate=True,
        )
    if tag == "ma2garch":
        return Scenario(tag, "garch", garch=GarchParams(mu=mu))
    raise ValueError(f"unknown scenario {tag!r}; expected one of {SCENARIO_TAGS}")


def _burn_in(q: int) -> int:
    # Discard enough of the stream head that emitted values start at
    # (approximate) stationarity.
    return max(10 * q, 500)


class MovingAverageStream:
    """Streaming moving-average process; a pure function of its seed.

    ``take(n)`` draws exactly the same values as ``n`` successive ``step()``
    calls on the same seed (vectorized generation consumes the generator
    identically).
    """

    def __init__(self, params: MaParams, seed):
        self.params = params
        self._rng = np.random.default_rng(seed)
        self._thetas = np.asarray(params.thetas, dtype=np.float64)
        q = params.q
        burn = _burn_in(q)
        eps = self._rng.standard_normal(burn)
        self._tail = eps[burn - q:] if q else np.empty(0)

    def step(self) -> float:
        eps = self._rng.standard_normal()
        p = self.params
        x = p.mu + eps
        for j in range(1, p.q + 1):
            x += p.thetas[j - 1] * self._tail[p.q - j]
        if p.q:
            self._tail = np.append(self._tail[1:], eps)
        return float(x)

    def take(self, n: int) -> np.ndarray:
        p = self.params
        eps = self._rng.standard_normal(n)
        full = np.concatenate([self._tail, eps])
        x = p.mu + eps
        for j in range(1, p.q + 1):
            x += p.thetas[j - 1] * full[p.q - j : p.q - j + n]
        if p.q:
            self._tail = full[len(full) - p.q:]
        return x


class GarchStream:
    """Streaming moving average over GARCH(1, 1) innovations.

    The conditional variance starts at its unconditional level (less burn-in
    needed than starting at zero), followed by the standard burn-in.
    """

    def __init__(self, params: GarchParams, seed):
        self.params = params
        self._rng = np.random.default_rng(seed)
        self._sigma2 = params.unconditional_variance
        self._g1 = 0.0  # previous innovation
        self._g2 = 0.0  # innovation before that
        for xi in self._rng.standard_normal(_burn_in(2)):
            self._advance(xi)

    def _advance(self, xi: float) -> float:
        p = self.params
        self._sigma2 = p.alpha0 + p.alpha1 * self._g1 * self._g1 + p.beta1 * self._sigma2
        g = np.sqrt(self._sigma2) * xi
        z = p.mu + g + p.theta1 * self._g1 + p.theta2 * self._g2
        self._g2 = self._g1
        self._g1 = g
        return z

    def step(self) -> float:
        return float(self._advance(self._rng.standard_normal()))

    def take(self, n: int) -> np.ndarray:
        xis = self._rng.standard_normal(n)
        out = np.empty(n)
        for i in range(n):
            out[i] = self._advance(xis[i])
        return out


class _ScenarioStream:
    """Applies the scenario's element-wise map (exp) on top of the raw stream."""

    def __init__(self, scenario: Scenario, seed):
        self.scenario = scenario
        if scenario.kind == "ma":
            self._inner = MovingAverageStream(scenario.ma, seed)
        else:
            self._inner = GarchStream(scenario.garch, seed)

    def step(self) -> float:
        x = self._inner.step()
        return float(np.exp(x)) if self.scenario.exponentiate else x

    def take(self, n: int) -> np.ndarray:
        x = self._inner.take(n)
        return np.exp(x) if self.scenario.exponentiate else x


def scenario_stream(scenario: Scenario, seed):
    """Streaming source for a scenario; replaying a seed replays the stream."""
    return _ScenarioStream(scenario, seed)


def ma_autocovariance(params: MaParams, h: int) -> float:
    """Lag-``h`` autocovariance ``sum_j theta_j theta_{j+h}`` (theta_0 = 1)."""
    h = abs(int(h))
    coeffs = np.concatenate([[1.0], np.asarray(params.thetas, dtype=np.float64)])
    if h >= coeffs.size:
        return 0.0
    return float(np.dot(coeffs[: coeffs.size - h], coeffs[h:]))


def sigma_inf_ma(params: MaParams) -> float:
    """Long-run variance of a moving average: ``(1 + sum_j theta_j)**2``.

    Equals the sum of all autocovariances for unit-variance innovations.
    """
    return float((1.0 + np.sum(params.thetas)) ** 2)


def true_mean(scenario: Scenario) -> float:
    """Expected value of the scenario's statistic.

    Plain means sit at ``mu``; the log-of-mean-of-exp statistic targets
    ``mu + Var(X)/2`` by the Gaussian log-moment identity.
    """
    if scenario.kind == "garch":
        return scenario.garch.mu
    if scenario.exponentiate:
        var_x = ma_autocovariance(scenario.ma, 0)
        return scenario.ma.mu + var_x / 2.0
    return scenario.ma.mu


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    standard_error: float
    series_length: int
    replications: int
    seed: int | None = None


def sigma_inf_mc(
    scenario: Scenario,
    series_length: int = 100_000,
    replications: int = 500,
    seed=0,
) -> MonteCarloEstimate:
    """Monte Carlo oracle for the long-run variance of a scenario's stream.

    Simulates ``replications`` independent series and returns the
    across-replication variance of ``sqrt(n) * (series mean - grand mean)``,
    with a normal-theory standard error. This is the ground truth for
    scenarios without a closed form (garch-driven, exponentiated); for pure
    moving averages it cross-validates :func:`sigma_inf_ma`.
    """
    if replications < 2:
        raise ValueError("need at least 2 replications")
    R = int(replications)
    L = int(series_length)
    rng = np.random.default_rng(seed)
    sums = np.zeros(R)
    if scenario.kind == "ma":
        p = scenario.ma
        q = p.q
        thetas = np.asarray(p.thetas)
        lag = np.zeros((q, R))  # lag[j-1] holds innovations from j steps back
        burn = _burn_in(q)
        for t in range(burn + L):
            eps = rng.standard_normal(R)
            x = p.mu + eps
            for j in range(1, q + 1):
                x = x + thetas[j - 1] * lag[j - 1]
            if q:
                lag[1:] = lag[:-1]
                lag[0] = eps
            if t >= burn:
                sums += np.exp(x) if scenario.exponentiate else x
    else:
        p = scenario.garch
        sigma2 = np.full(R, p.unconditional_variance)
        g1 = np.zeros(R)
        g2 = np.zeros(R)
        burn = _burn_in(2)
        for t in range(burn + L):
            xi = rng.standard_normal(R)
            sigma2 = p.alpha0 + p.alpha1 * g1 * g1 + p.beta1 * sigma2
            g = np.sqrt(sigma2) * xi
            z = p.mu + g + p.theta1 * g1 + p.theta2 * g2
            g2, g1 = g1, g
            if t >= burn:
                sums += z
    means = sums / L
    est = float(L * np.var(means, ddof=1))
    se = est * float(np.sqrt(2.0 / (R - 1)))
    return MonteCarloEstimate(
        estimate=est, standard_error=se, series_length=L,
        replications=R, seed=seed if isinstance(seed, int) else None,
    )


def oracle_sigma_inf(scenario: Scenario, mc_length: int = 100_000,
                     mc_replications: int = 500, mc_seed: int = 20_240_001) -> dict:
    """Long-run variance target for a scenario, with provenance.

    Closed form where one exists, otherwise the Monte Carlo oracle with the
    given (fixed) seed so experiment metadata pins the exact target used.
    """
    if scenario.kind == "ma" and not scenario.exponentiate:
        return {"value": sigma_inf_ma(scenario.ma), "source": "closed-form",
                "standard_error": 0.0}
    mc = sigma_inf_mc(scenario, mc_length, mc_replications, mc_seed)
    return {
        "value": mc.estimate, "source": "monte-carlo",
        "standard_error": mc.standard_error,
        "mc_length": mc.series_length, "mc_replications": mc.replications,
        "mc_seed": mc_seed,
    }
