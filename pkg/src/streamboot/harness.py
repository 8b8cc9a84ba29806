"""Simulation experiments: coverage, variance accuracy, timing, rate checks.

A single experiment streams one synthetic series per replication through one
bootstrap ensemble and records, at each requested checkpoint, the variance
estimate, whether the confidence interval covered the true mean, and the
median per-update wall time. Replications are independent jobs; every
replication's random draws are a pure function of (master seed, method,
scenario, replication index), so results are byte-reproducible regardless of
how many workers execute them.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validation import BETA_DEFAULT, check_beta, check_level
from .engine import OnlineBootstrap
from .generators import Scenario, oracle_sigma_inf, scenario_stream, true_mean

__all__ = [
    "CSV_COLUMNS",
    "ExperimentConfig",
    "RunResult",
    "TimingTrace",
    "coverage",
    "rate_check",
    "run_experiment",
    "run_replication",
    "timing_benchmark",
    "variance_stats",
    "write_metadata",
    "write_results",
]

CSV_COLUMNS = (
    "method", "scenario", "n", "rep", "var_est", "covered",
    "ci_lo", "ci_hi", "elapsed_us", "regens", "subseed",
)
SCHEMA_VERSION = 1

METHODS = ("ar", "iid", "block")
_METHOD_IDS = {"ar": 1, "iid": 2, "block": 3}
_SCENARIO_IDS = {"ma0": 1, "ma2": 2, "ma20": 3, "logmeanexp": 4, "ma2garch": 5}
_DATA_TAG, _CHAIN_TAG = 0, 1

WORKERS_ENV = "STREAMBOOT_WORKERS"


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid description for one experiment run."""

    scenario: Scenario
    methods: tuple = ("ar",)
    n_checkpoints: tuple = (500, 2000, 5000)
    n_chains: int = 250
    replications: int = 250
    beta: float = BETA_DEFAULT
    level: float = 0.9
    master_seed: int = 0
    history_cap: int | None = None

    def __post_init__(self):
        if not self.n_checkpoints:
            raise ValueError("n_checkpoints must be nonempty")
        if list(self.n_checkpoints) != sorted(set(self.n_checkpoints)):
            raise ValueError("n_checkpoints must be strictly increasing")
        if self.n_chains < 2:
            raise ValueError("need at least 2 chains")
        if self.replications < 1:
            raise ValueError("need at least 1 replication")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        check_beta(self.beta)
        check_level(self.level)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.to_dict(),
            "methods": list(self.methods),
            "n_checkpoints": [int(n) for n in self.n_checkpoints],
            "n_chains": self.n_chains,
            "replications": self.replications,
            "beta": self.beta,
            "level": self.level,
            "master_seed": self.master_seed,
            "history_cap": self.history_cap,
        }


@dataclass(frozen=True)
class RunResult:
    """One (method, scenario, checkpoint, replication) metrics row."""

    method: str
    scenario: str
    n: int
    rep: int
    var_est: float
    covered: float
    ci_lo: float
    ci_hi: float
    elapsed_us: float
    regens: int
    subseed: int

    def astuple(self) -> tuple:
        return (self.method, self.scenario, self.n, self.rep, self.var_est,
                self.covered, self.ci_lo, self.ci_hi, self.elapsed_us,
                self.regens, self.subseed)


def _rep_entropy(master_seed: int, method: str, scenario_tag: str, rep: int) -> tuple:
    return (int(master_seed), _METHOD_IDS[method], _SCENARIO_IDS[scenario_tag], int(rep))


def replication_subseed(master_seed: int, method: str, scenario_tag: str, rep: int) -> int:
    """Attribution id for a replication; pure function of its coordinates."""
    ent = _rep_entropy(master_seed, method, scenario_tag, rep)
    return int(np.random.SeedSequence(ent).generate_state(1, dtype=np.uint64)[0])


def run_replication(config: ExperimentConfig, method: str, rep: int,
                    measure_time: bool = True) -> list:
    """Stream one series through one ensemble, evaluating at each checkpoint.

    Generator or engine failures do not abort the batch: the replication is
    recorded as NaN rows. With ``measure_time=False`` the per-update clock is
    skipped and the elapsed column is NaN; experiment grids run that way so
    their output files are byte-reproducible (wall time never is).
    """
    scen = config.scenario
    n_max = int(max(config.n_checkpoints))
    ent = _rep_entropy(config.master_seed, method, scen.tag, rep)
    subseed = replication_subseed(config.master_seed, method, scen.tag, rep)
    try:
        return _run_replication_inner(config, method, rep, ent, subseed, n_max,
                                      measure_time)
    except Exception:
        return [
            RunResult(method, scen.tag, int(n), rep, float("nan"), float("nan"),
                      float("nan"), float("nan"), float("nan"), 0, subseed)
            for n in config.n_checkpoints
        ]


def _run_replication_inner(config, method, rep, ent, subseed, n_max,
                           measure_time) -> list:
    scen = config.scenario
    series = scenario_stream(scen, seed=ent + (_DATA_TAG,)).take(n_max)
    cap = config.history_cap if config.history_cap is not None else n_max
    est = OnlineBootstrap(
        method=method,
        n_chains=config.n_chains,
        beta=config.beta,
        level=config.level,
        random_state=ent + (_CHAIN_TAG,),
        history_cap=cap if method == "block" else None,
    )
    est.fit(np.empty((0, 1)))
    theta = true_mean(scen)
    checkpoints = set(int(n) for n in config.n_checkpoints)
    durations = np.empty(n_max) if measure_time else None
    results = []
    window_start = 0
    clock = time.perf_counter_ns
    for t in range(1, n_max + 1):
        x = series[t - 1]
        if measure_time:
            t0 = clock()
            est.observe(x)
            durations[t - 1] = clock() - t0
        else:
            est.observe(x)
        if t in checkpoints:
            var = float(est.variance_estimate()[0])
            summ = est.confidence_interval(config.level, transform=scen.transform)
            lo, hi = float(summ.ci_lower[0]), float(summ.ci_upper[0])
            covered = 1.0 if lo <= theta <= hi else 0.0
            if measure_time:
                med_us = float(np.median(durations[window_start:t])) / 1e3
            else:
                med_us = float("nan")
            results.append(RunResult(
                method, scen.tag, t, rep, var, covered, lo, hi,
                med_us, est.regen_count_, subseed,
            ))
            window_start = t
    return results


def _replication_task(config: ExperimentConfig, method: str, rep: int) -> list:
    # wall time is excluded from grid rows: output files are byte-reproducible
    return run_replication(config, method, rep, measure_time=False)


def resolve_workers(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> tuple:
    """Run the full (method x replication) grid; returns (rows, metadata).

    Rows come back sorted by (method, scenario, n, rep) so output files are
    order-deterministic no matter how the worker pool schedules jobs.
    """
    workers = resolve_workers(workers)
    tasks = [(config, m, r) for m in config.methods for r in range(config.replications)]
    if workers == 1 or len(tasks) == 1:
        batches = [_replication_task(*t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_replication_task_star, tasks, chunksize=1))
    rows = [row for batch in batches for row in batch]
    rows.sort(key=lambda r: (r.method, r.scenario, r.n, r.rep))
    meta = build_metadata(config)
    return rows, meta


def _replication_task_star(args):
    return _replication_task(*args)


def build_metadata(config: ExperimentConfig) -> dict:
    scen = config.scenario
    return {
        "schema_version": SCHEMA_VERSION,
        "columns": list(CSV_COLUMNS),
        "config": config.to_dict(),
        "oracle": {
            "true_mean": true_mean(scen),
            "sigma_inf": oracle_sigma_inf(scen),
        },
        "level": config.level,
    }


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results(rows, csv_path, metadata: dict | None = None, meta_path=None):
    """Write rows as CSV (exact column set) plus the metadata sidecar.

    The sidecar records the resolved config, oracle reference values and a
    content hash of the CSV bytes.
    """
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        lines.append(",".join(_fmt(v) for v in r.astuple()))
    payload = ("\n".join(lines) + "\n").encode("ascii")
    with open(csv_path, "wb") as fh:
        fh.write(payload)
    if metadata is not None:
        meta = dict(metadata)
        meta["csv_sha256"] = hashlib.sha256(payload).hexdigest()
        meta["rows"] = len(rows)
        target = meta_path or (str(csv_path) + ".meta.json")
        with open(target, "w", encoding="ascii") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


def write_metadata(metadata: dict, path):
    with open(path, "w", encoding="ascii") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- aggregate statistics ------------------------------------------------


@dataclass(frozen=True)
class CoverageStats:
    rate: float
    standard_error: float
    count: int


def coverage(rows) -> CoverageStats:
    """Empirical coverage rate with its binomial standard error.

    Covered flags are summed as integers before the single division, so the
    rate is exactly reproducible from the raw rows.
    """
    flags = [r.covered for r in rows if np.isfinite(r.covered)]
    if not flags:
        raise ValueError("no usable rows")
    m = len(flags)
    rate = float(sum(int(f) for f in flags)) / m
    se = float(np.sqrt(rate * (1.0 - rate) / m))
    return CoverageStats(rate=rate, standard_error=se, count=m)


@dataclass(frozen=True)
class VarianceStats:
    mean: float
    std: float
    count: int


def variance_stats(rows) -> VarianceStats:
    """Sample mean and standard deviation of the variance estimates."""
    vals = np.array([r.var_est for r in rows if np.isfinite(r.var_est)])
    if vals.size == 0:
        raise ValueError("no usable rows")
    std = float(np.std(vals, ddof=1)) if vals.size > 1 else 0.0
    return VarianceStats(mean=float(np.mean(vals)), std=std, count=int(vals.size))


# -- timing ----------------------------------------------------------------


@dataclass(frozen=True)
class TimingTrace:
    """Per-update wall times for one method streamed to a fixed length."""

    method: str
    per_update_ns: np.ndarray
    regen_steps: tuple
    state_nbytes: dict  # step -> retained chain-state bytes
    n_chains: int
    seed: int


def timing_benchmark(
    method: str,
    stream_length: int,
    n_chains: int = 250,
    seed: int = 0,
    scenario: Scenario | None = None,
    beta: float = BETA_DEFAULT,
    probe_steps: tuple = (),
) -> TimingTrace:
    """Time every single update of one ensemble on one stream.

    Runs strictly sequentially (no pool) with a nanosecond wall clock. For
    the block method the steps at which a full weight regeneration happened
    are reported; `probe_steps` additionally records the retained state size
    at the given step indices.
    """
    from .generators import make_scenario

    scen = scenario or make_scenario("ma0")
    series = scenario_stream(scen, seed=(int(seed), _DATA_TAG)).take(int(stream_length))
    est = OnlineBootstrap(
        method=method, n_chains=n_chains, beta=beta,
        random_state=(int(seed), _CHAIN_TAG),
        history_cap=None,
    )
    est.fit(np.empty((0, 1)))
    n = int(stream_length)
    durations = np.empty(n)
    regen_steps = []
    probes = {}
    probe = set(int(p) for p in probe_steps)
    last_regens = 0
    clock = time.perf_counter_ns
    for t in range(1, n + 1):
        x = series[t - 1]
        t0 = clock()
        est.observe(x)
        durations[t - 1] = clock() - t0
        if method == "block":
            regens = est.regen_count_
            if regens != last_regens:
                regen_steps.append(t)
                last_regens = regens
        if t in probe:
            probes[t] = est.state_nbytes()
    return TimingTrace(
        method=method, per_update_ns=durations, regen_steps=tuple(regen_steps),
        state_nbytes=probes, n_chains=n_chains, seed=int(seed),
    )


def timing_rows(trace: TimingTrace, scenario_tag: str = "ma0") -> list:
    """Flatten a timing trace to result rows (one per update) for CSV output."""
    nan = float("nan")
    regset = set(trace.regen_steps)
    rows = []
    regens = 0
    for t in range(1, trace.per_update_ns.size + 1):
        if t in regset:
            regens += 1
        rows.append(RunResult(
            trace.method, scenario_tag, t, 0, nan, nan, nan, nan,
            float(trace.per_update_ns[t - 1]) / 1e3, regens, trace.seed,
        ))
    return rows


# -- convergence-rate checks ------------------------------------------------


@dataclass(frozen=True)
class RateCheck:
    """Fitted log-log slopes of the variance estimator's error moments."""

    beta_grid: tuple
    n_grid: tuple
    target: float
    bias_sq: dict       # beta -> array over n_grid
    variance: dict      # beta -> array over n_grid
    mse_at_largest: dict  # beta -> scalar
    bias_sq_slopes: dict
    variance_slopes: dict
    theoretical_bias_sq_slope: dict
    theoretical_variance_slope: dict

    @property
    def mse_minimizer(self) -> float:
        return min(self.mse_at_largest, key=self.mse_at_largest.get)


def _loglog_slope(n_grid, values) -> float:
    x = np.log(np.asarray(n_grid, dtype=np.float64))
    y = np.log(np.asarray(values, dtype=np.float64))
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)


def rate_check(
    beta_grid,
    n_grid,
    scenario: Scenario,
    replications: int = 1000,
    master_seed: int = 0,
    n_chains: int = 1000,
    workers: int | None = None,
) -> RateCheck:
    """Measure how bias and variance of the variance estimate shrink with n.

    For each exponent in ``beta_grid`` the autoregressive ensemble is run for
    ``replications`` independent series checkpointed at ``n_grid``; the
    squared bias and variance of the variance estimates are regressed on n
    in log-log space. Also reports which grid exponent attains the smallest
    empirical mean-squared error at the largest n.

    ``n_chains`` defaults higher than in coverage experiments so that the
    finite-replicate noise floor (which is independent of n) stays below the
    n-driven variance over the whole grid.
    """
    n_grid = tuple(int(n) for n in n_grid)
    if len(n_grid) < 2 or np.log10(max(n_grid) / min(n_grid)) < 1.5:
        raise ValueError("insufficient grid: n_grid must span >= 1.5 decades")
    if replications < 2:
        raise ValueError("need at least 2 replications")
    target = oracle_sigma_inf(scenario)["value"]
    bias_sq, variance, mse, b_slopes, v_slopes = {}, {}, {}, {}, {}
    th_b, th_v = {}, {}
    for beta in beta_grid:
        beta = float(beta)
        config = ExperimentConfig(
            scenario=scenario, methods=("ar",), n_checkpoints=n_grid,
            n_chains=n_chains, replications=replications, beta=beta,
            master_seed=_beta_seed(master_seed, beta), level=0.9,
        )
        rows, _ = run_experiment(config, workers=workers)
        ests = np.full((replications, len(n_grid)), np.nan)
        idx = {n: j for j, n in enumerate(n_grid)}
        for r in rows:
            ests[r.rep, idx[r.n]] = r.var_est
        valid = np.isfinite(ests).all(axis=1)
        ests = ests[valid]
        mean = ests.mean(axis=0)
        var = ests.var(axis=0, ddof=1)
        bias_sq[beta] = (mean - target) ** 2
        variance[beta] = var
        mse[beta] = float(np.mean((ests[:, -1] - target) ** 2))
        b_slopes[beta] = _loglog_slope(n_grid, bias_sq[beta])
        v_slopes[beta] = _loglog_slope(n_grid, variance[beta])
        th_b[beta] = -2.0 * beta / (1.0 + beta)
        th_v[beta] = beta - 1.0
    return RateCheck(
        beta_grid=tuple(float(b) for b in beta_grid), n_grid=n_grid,
        target=float(target), bias_sq=bias_sq, variance=variance,
        mse_at_largest=mse, bias_sq_slopes=b_slopes, variance_slopes=v_slopes,
        theoretical_bias_sq_slope=th_b, theoretical_variance_slope=th_v,
    )


def _beta_seed(master_seed: int, beta: float) -> int:
    # Distinct, reproducible sub-seed per grid exponent.
    h = hashlib.sha256(f"{master_seed}:{beta!r}".encode()).digest()
    return int.from_bytes(h[:8], "little")
