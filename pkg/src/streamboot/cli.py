"""Command-line entry point: experiments, oracles, benchmarks, live streams.

Exit codes are stable API: 0 success, 1 invalid configuration, 2 I/O
failure, 3 at least one replication panicked. Diagnostics go to stderr;
stdout and output files carry data only.

All randomness flows from one ``--seed``; ``run``, ``oracle`` and ``bench``
refuse to start without it (no auto-seeding). Values can also come from a
flat INI config file (one section per subcommand, ``key = value`` lines);
explicit flags override file values, which override built-in defaults.
"""

from __future__ import annotations

import argparse
import configparser
import json
import signal
import sys

import numpy as np

from ._validation import BETA_DEFAULT
from .engine import OnlineBootstrap
from .generators import (
    SCENARIO_TAGS,
    make_scenario,
    oracle_sigma_inf,
    sigma_inf_mc,
    true_mean,
)
from .harness import (
    ExperimentConfig,
    build_metadata,
    run_experiment,
    timing_benchmark,
    timing_rows,
    write_results,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_REPLICATION = 3


class ConfigError(ValueError):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streamboot",
        description="Online bootstrap experiments and streaming uncertainty.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = {"--config": dict(default=None, metavar="PATH",
                               help="INI config file; flags override its values")}

    run = sub.add_parser("run", help="run a coverage/accuracy experiment grid")
    run.add_argument("--config", **common["--config"])
    run.add_argument("--scenario", default=None, choices=SCENARIO_TAGS,
                     help="data-generating scenario (default: ma2)")
    run.add_argument("--methods", default=None,
                     help="comma list from {ar,iid,block} (default: ar)")
    run.add_argument("--n", default=None, metavar="N1,N2,...",
                     help="strictly increasing checkpoints (default: 500,2000,5000)")
    run.add_argument("--reps", type=int, default=None,
                     help="replications M (default: 250)")
    run.add_argument("--chains", type=int, default=None,
                     help="bootstrap replicates B per ensemble (default: 250)")
    run.add_argument("--beta", type=float, default=None,
                     help=f"AR weight exponent in the open interval (0, 0.5) "
                          f"(default: {BETA_DEFAULT!r})")
    run.add_argument("--level", type=float, default=None,
                     help="nominal confidence level (default: 0.9)")
    run.add_argument("--mu", type=float, default=None,
                     help="scenario location parameter (default: 0.0)")
    run.add_argument("--seed", type=int, default=None,
                     help="master seed; required, never auto-chosen")
    run.add_argument("--out", default=None, metavar="CSV",
                     help="output CSV path (metadata sidecar written next to it)")

    oracle = sub.add_parser("oracle", help="print a scenario's ground-truth targets")
    oracle.add_argument("--config", **common["--config"])
    oracle.add_argument("--scenario", default=None, choices=SCENARIO_TAGS)
    oracle.add_argument("--mu", type=float, default=None)
    oracle.add_argument("--seed", type=int, default=None,
                        help="seed for the Monte Carlo oracle; required")
    oracle.add_argument("--mc-n", type=int, default=None,
                        help="Monte Carlo series length (default: 100000)")
    oracle.add_argument("--mc-reps", type=int, default=None,
                        help="Monte Carlo replications (default: 500)")

    bench = sub.add_parser("bench", help="per-update timing benchmark")
    bench.add_argument("--config", **common["--config"])
    bench.add_argument("--method", default=None, choices=("ar", "iid", "block"))
    bench.add_argument("--t", type=int, default=None,
                       help="stream length (default: 5000)")
    bench.add_argument("--chains", type=int, default=None,
                       help="bootstrap replicates B (default: 250)")
    bench.add_argument("--beta", type=float, default=None,
                       help=f"AR weight exponent (default: {BETA_DEFAULT!r})")
    bench.add_argument("--seed", type=int, default=None, help="seed; required")
    bench.add_argument("--out", default=None, metavar="CSV")

    stream = sub.add_parser(
        "stream",
        help="read numeric lines from stdin, emit running mean + interval rows",
    )
    stream.add_argument("--config", **common["--config"])
    stream.add_argument("--seed", type=int, default=None,
                        help="master seed; required unless --resume")
    stream.add_argument("--chains", type=int, default=None,
                        help="bootstrap replicates B (default: 250)")
    stream.add_argument("--beta", type=float, default=None,
                        help=f"AR weight exponent (default: {BETA_DEFAULT!r})")
    stream.add_argument("--level", type=float, default=None,
                        help="confidence level (default: 0.9)")
    stream.add_argument("--every", type=int, default=None, metavar="K",
                        help="emit one row every K observations (default: 1)")
    stream.add_argument("--snapshot", default=None, metavar="PATH",
                        help="write ensemble snapshot here on exit/termination")
    stream.add_argument("--resume", default=None, metavar="PATH",
                        help="resume from a snapshot written by --snapshot")
    return parser


def _read_config_section(path: str | None, section: str) -> dict:
    if not path:
        return {}
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    if not cp.has_section(section):
        return {}
    return dict(cp.items(section))


def _resolve(args, section: str, spec: dict) -> dict:
    """Merge precedence: flags > config file section > defaults."""
    file_vals = _read_config_section(args.config, section)
    out = {}
    for key, (default, cast) in spec.items():
        flag_val = getattr(args, key, None)
        if flag_val is not None:
            out[key] = flag_val
        elif key in file_vals:
            try:
                out[key] = cast(file_vals[key])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad config value for {key}: {exc}") from exc
        else:
            out[key] = default
    return out


def _int_list(text: str) -> tuple:
    return tuple(int(p) for p in str(text).split(",") if p != "")


def _str_list(text: str) -> tuple:
    return tuple(p.strip() for p in str(text).split(",") if p.strip())


def _require_seed(value, hint: str):
    if value is None:
        raise ConfigError(
            f"--seed is required for {hint} (randomness is never auto-seeded)"
        )
    return int(value)


def cmd_run(args) -> int:
    spec = {
        "scenario": ("ma2", str),
        "methods": ("ar", str),
        "n": ("500,2000,5000", str),
        "reps": (250, int),
        "chains": (250, int),
        "beta": (BETA_DEFAULT, float),
        "level": (0.9, float),
        "mu": (0.0, float),
        "seed": (None, int),
        "out": (None, str),
    }
    vals = _resolve(args, "run", spec)
    seed = _require_seed(vals["seed"], "run")
    if vals["out"] is None:
        raise ConfigError("--out is required for run")
    try:
        config = ExperimentConfig(
            scenario=make_scenario(vals["scenario"], mu=vals["mu"]),
            methods=_str_list(vals["methods"]),
            n_checkpoints=_int_list(vals["n"]),
            n_chains=int(vals["chains"]),
            replications=int(vals["reps"]),
            beta=float(vals["beta"]),
            level=float(vals["level"]),
            master_seed=seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows, meta = run_experiment(config)
    meta["cli"] = {k: vals[k] for k in sorted(vals)}
    write_results(rows, vals["out"], metadata=meta)
    failed = sum(1 for r in rows if not np.isfinite(r.covered))
    if failed:
        print(f"{failed} replication rows failed (recorded as NaN)", file=sys.stderr)
        return EXIT_REPLICATION
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = {
        "scenario": ("ma2", str),
        "mu": (0.0, float),
        "seed": (None, int),
        "mc_n": (100_000, int),
        "mc_reps": (500, int),
    }
    vals = _resolve(args, "oracle", spec)
    _require_seed(vals["seed"], "oracle")
    scen = make_scenario(vals["scenario"], mu=vals["mu"])
    print(f"scenario = {scen.tag}")
    print(f"mean = {true_mean(scen)!r}")
    if scen.kind == "ma" and not scen.exponentiate:
        info = oracle_sigma_inf(scen)
        print(f"sigma_inf = {info['value']!r}")
        print(f"sigma_inf_se = {info['standard_error']!r}")
        print("source = closed-form")
    else:
        mc = sigma_inf_mc(scen, series_length=vals["mc_n"],
                          replications=vals["mc_reps"], seed=vals["seed"])
        print(f"sigma_inf = {mc.estimate!r}")
        print(f"sigma_inf_se = {mc.standard_error!r}")
        print("source = monte-carlo")
        print(f"mc_n = {mc.series_length}")
        print(f"mc_reps = {mc.replications}")
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = {
        "method": ("ar", str),
        "t": (5000, int),
        "chains": (250, int),
        "beta": (BETA_DEFAULT, float),
        "seed": (None, int),
        "out": (None, str),
    }
    vals = _resolve(args, "bench", spec)
    seed = _require_seed(vals["seed"], "bench")
    if vals["out"] is None:
        raise ConfigError("--out is required for bench")
    trace = timing_benchmark(
        method=vals["method"], stream_length=vals["t"],
        n_chains=vals["chains"], seed=seed, beta=vals["beta"],
    )
    rows = timing_rows(trace)
    meta = {
        "schema_version": 1,
        "kind": "timing",
        "cli": {k: vals[k] for k in sorted(vals)},
        "regen_steps": list(trace.regen_steps),
        "total_ms": float(trace.per_update_ns.sum()) / 1e6,
    }
    write_results(rows, vals["out"], metadata=meta)
    print(
        f"{vals['method']}: total "
        f"{trace.per_update_ns.sum() / 1e6:.1f} ms over {vals['t']} updates, "
        f"{len(trace.regen_steps)} regenerations",
        file=sys.stderr,
    )
    return EXIT_OK


def _format_stream_row(t: int, est: OnlineBootstrap, level: float) -> str:
    s = est.confidence_interval(level)
    mean = est.mean_
    cells = [str(t)]
    cells += [repr(float(v)) for v in mean]
    cells += [repr(float(v)) for v in s.ci_lower]
    cells += [repr(float(v)) for v in s.ci_upper]
    return ",".join(cells)


def _stream_header(d: int) -> str:
    if d == 1:
        return "t,mean,ci_lo,ci_hi"
    cols = ["t"]
    cols += [f"mean_{j}" for j in range(d)]
    cols += [f"ci_lo_{j}" for j in range(d)]
    cols += [f"ci_hi_{j}" for j in range(d)]
    return ",".join(cols)


def cmd_stream(args) -> int:
    spec = {
        "seed": (None, int),
        "chains": (250, int),
        "beta": (BETA_DEFAULT, float),
        "level": (0.9, float),
        "every": (1, int),
        "snapshot": (None, str),
        "resume": (None, str),
    }
    vals = _resolve(args, "stream", spec)
    every = max(1, int(vals["every"]))
    level = float(vals["level"])
    resuming = vals["resume"] is not None
    if resuming:
        with open(vals["resume"], "r", encoding="ascii") as fh:
            est = OnlineBootstrap.from_snapshot(json.load(fh))
    else:
        seed = _require_seed(vals["seed"], "stream (unless resuming)")
        est = OnlineBootstrap(
            method="ar", n_chains=int(vals["chains"]), beta=float(vals["beta"]),
            level=level, random_state=seed,
        )

    stopped = False

    def _stop(signum, frame):
        nonlocal stopped
        stopped = True

    old_term = signal.signal(signal.SIGTERM, _stop)
    old_int = signal.signal(signal.SIGINT, _stop)
    malformed = 0
    header_done = resuming
    exit_code = EXIT_OK
    try:
        for line in sys.stdin:
            if stopped:
                break
            text = line.strip()
            try:
                values = [float(p) for p in text.split()]
                if not values:
                    raise ValueError("empty line")
            except ValueError:
                malformed += 1
                continue
            if est._initialized and est._dim is not None and len(values) != est._dim:
                print(
                    f"fatal: dimension changed from {est._dim} to {len(values)}",
                    file=sys.stderr,
                )
                exit_code = EXIT_CONFIG
                break
            est.observe(values if len(values) > 1 else values[0])
            if not header_done:
                print(_stream_header(est._dim), flush=True)
                header_done = True
            if est.t_ % every == 0:
                print(_format_stream_row(est.t_, est, level), flush=True)
        if not header_done:
            print(_stream_header(1), flush=True)
    finally:
        signal.signal(signal.SIGTERM, old_term)
        signal.signal(signal.SIGINT, old_int)
        if vals["snapshot"] and est._initialized:
            with open(vals["snapshot"], "w", encoding="ascii") as fh:
                json.dump(est.snapshot(), fh)
                fh.write("\n")
        if malformed:
            print(f"skipped {malformed} malformed line(s)", file=sys.stderr)
    return exit_code


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    handlers = {
        "run": cmd_run,
        "oracle": cmd_oracle,
        "bench": cmd_bench,
        "stream": cmd_stream,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
