import hashlib
import json

import numpy as np
import pytest

import streamboot.harness as harness
from streamboot.generators import make_scenario
from streamboot.harness import (
    CSV_COLUMNS,
    ExperimentConfig,
    RunResult,
    coverage,
    rate_check,
    replication_subseed,
    run_experiment,
    run_replication,
    timing_benchmark,
    timing_rows,
    variance_stats,
    write_results,
)


def _astext(rows):
    # repr-based comparison: NaN cells compare equal as text
    return ["|".join(repr(v) for v in r.astuple()) for r in rows]


def _config(**overrides):
    base = dict(
        scenario=make_scenario("ma2"),
        methods=("ar",),
        n_checkpoints=(40, 90),
        n_chains=16,
        replications=3,
        master_seed=77,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


class TestExperimentConfig:
    def test_checkpoint_validation(self):
        with pytest.raises(ValueError):
            _config(n_checkpoints=())
        with pytest.raises(ValueError):
            _config(n_checkpoints=(100, 50))
        with pytest.raises(ValueError):
            _config(n_checkpoints=(50, 50))

    def test_counts_validation(self):
        with pytest.raises(ValueError):
            _config(n_chains=1)
        with pytest.raises(ValueError):
            _config(replications=0)

    def test_method_and_beta_validation(self):
        with pytest.raises(ValueError):
            _config(methods=("jackknife",))
        with pytest.raises(ValueError):
            _config(beta=0.5)

    def test_to_dict_echoes_everything(self):
        d = _config().to_dict()
        assert d["scenario"]["tag"] == "ma2"
        assert d["n_checkpoints"] == [40, 90]
        assert d["master_seed"] == 77


class TestSubseeds:
    def test_pure_function_of_coordinates(self):
        a = replication_subseed(7, "ar", "ma2", 3)
        b = replication_subseed(7, "ar", "ma2", 3)
        assert a == b

    def test_distinct_across_coordinates(self):
        base = replication_subseed(7, "ar", "ma2", 3)
        assert replication_subseed(7, "ar", "ma2", 4) != base
        assert replication_subseed(7, "iid", "ma2", 3) != base
        assert replication_subseed(7, "ar", "ma0", 3) != base
        assert replication_subseed(8, "ar", "ma2", 3) != base


class TestRunReplication:
    def test_row_layout(self):
        rows = run_replication(_config(), "ar", 0)
        assert [r.n for r in rows] == [40, 90]
        for r in rows:
            assert r.method == "ar" and r.scenario == "ma2" and r.rep == 0
            assert np.isfinite(r.var_est) and r.var_est >= 0
            assert r.covered in (0.0, 1.0)
            assert r.ci_lo <= r.ci_hi
            assert r.elapsed_us > 0
            assert r.regens == 0

    def test_deterministic_rerun(self):
        a = run_replication(_config(), "ar", 1, measure_time=False)
        b = run_replication(_config(), "ar", 1, measure_time=False)
        assert _astext(a) == _astext(b)

    def test_earlier_replications_unaffected_by_total_count(self):
        few = run_replication(_config(replications=2), "ar", 1, measure_time=False)
        many = run_replication(_config(replications=250), "ar", 1, measure_time=False)
        assert _astext(few) == _astext(many)

    def test_block_counts_regenerations(self):
        rows = run_replication(_config(methods=("block",)), "block", 0)
        # cubes <= 40: 1, 8, 27 -> 3; cubes <= 90: +64 -> 4
        assert rows[0].regens == 3
        assert rows[1].regens == 4

    def test_failure_recorded_as_nan_rows(self, monkeypatch):
        def boom(scenario, seed):
            raise RuntimeError("generator exploded")

        monkeypatch.setattr(harness, "scenario_stream", boom)
        rows = run_replication(_config(), "ar", 0)
        assert [r.n for r in rows] == [40, 90]
        for r in rows:
            assert np.isnan(r.var_est) and np.isnan(r.covered)
            assert np.isnan(r.elapsed_us)
            assert r.subseed == replication_subseed(77, "ar", "ma2", 0)

    def test_logmeanexp_coverage_flag_uses_transform(self):
        config = _config(scenario=make_scenario("logmeanexp"),
                         n_checkpoints=(200,), n_chains=64)
        rows = run_replication(config, "ar", 0)
        assert rows[0].covered in (0.0, 1.0)
        # transformed interval must sit near ln of the running exp-mean
        assert rows[0].ci_lo < 1.2 and rows[0].ci_hi > 0.2


class TestRunExperiment:
    def test_rows_sorted_and_complete(self):
        config = _config(methods=("iid", "ar"), replications=2)
        rows, meta = run_experiment(config, workers=1)
        assert len(rows) == 2 * 2 * 2
        keys = [(r.method, r.scenario, r.n, r.rep) for r in rows]
        assert keys == sorted(keys)
        assert meta["config"]["methods"] == ["iid", "ar"]
        assert meta["oracle"]["sigma_inf"]["value"] == 3.0625

    def test_worker_count_does_not_change_results(self):
        config = _config(methods=("ar", "iid"), replications=3)
        rows1, _ = run_experiment(config, workers=1)
        rows2, _ = run_experiment(config, workers=2)
        assert _astext(rows1) == _astext(rows2)

    def test_workers_env_override(self, monkeypatch):
        monkeypatch.setenv(harness.WORKERS_ENV, "1")
        assert harness.resolve_workers() == 1
        monkeypatch.setenv(harness.WORKERS_ENV, "3")
        assert harness.resolve_workers() == 3
        assert harness.resolve_workers(2) == 2  # explicit argument wins


class TestAggregates:
    def _rows(self, flags):
        return [
            RunResult("ar", "ma2", 100, i, 1.0, f, 0.0, 1.0, 5.0, 0, 1)
            for i, f in enumerate(flags)
        ]

    def test_coverage_all(self):
        stats = coverage(self._rows([1.0] * 10))
        assert stats.rate == 1.0 and stats.standard_error == 0.0

    def test_coverage_half(self):
        stats = coverage(self._rows([1.0, 0.0] * 125))
        assert stats.rate == 0.5
        assert stats.standard_error == pytest.approx(0.0316, abs=0.0002)
        assert stats.count == 250

    def test_coverage_skips_nan(self):
        stats = coverage(self._rows([1.0, float("nan"), 0.0, 1.0]))
        assert stats.count == 3
        assert stats.rate == pytest.approx(2.0 / 3.0)

    def test_coverage_empty_raises(self):
        with pytest.raises(ValueError):
            coverage(self._rows([float("nan")]))
        with pytest.raises(ValueError):
            coverage([])

    def test_variance_stats(self):
        rows = [
            RunResult("ar", "ma2", 100, i, v, 1.0, 0.0, 1.0, 5.0, 0, 1)
            for i, v in enumerate([2.0, 2.0, 2.0])
        ]
        stats = variance_stats(rows)
        assert stats.mean == 2.0 and stats.std == 0.0

    def test_variance_stats_empty_raises(self):
        with pytest.raises(ValueError):
            variance_stats([])


class TestWriteResults:
    def test_csv_layout_and_hash(self, tmp_path):
        config = _config(replications=2)
        rows, meta = run_experiment(config, workers=1)
        csv_path = tmp_path / "out.csv"
        write_results(rows, csv_path, metadata=meta)
        text = csv_path.read_text()
        lines = text.strip().split("\n")
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 1 + len(rows)
        sidecar = json.loads((tmp_path / "out.csv.meta.json").read_text())
        assert sidecar["columns"] == list(CSV_COLUMNS)
        assert sidecar["rows"] == len(rows)
        digest = hashlib.sha256(csv_path.read_bytes()).hexdigest()
        assert sidecar["csv_sha256"] == digest
        assert sidecar["oracle"]["true_mean"] == 0.0

    def test_nan_cells_spelled_out(self, tmp_path):
        rows = [RunResult("ar", "ma2", 10, 0, float("nan"), float("nan"),
                          float("nan"), float("nan"), float("nan"), 0, 5)]
        path = tmp_path / "nan.csv"
        write_results(rows, path)
        assert "nan" in path.read_text()

    def test_byte_identical_across_runs(self, tmp_path):
        config = _config(methods=("ar", "block"), replications=2)
        paths = []
        for i, workers in enumerate((1, 2)):
            rows, meta = run_experiment(config, workers=workers)
            p = tmp_path / f"run{i}.csv"
            write_results(rows, p, metadata=meta)
            paths.append(p)
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestTiming:
    def test_block_regen_steps_are_cubes(self):
        trace = timing_benchmark("block", 150, n_chains=4, seed=1)
        assert trace.regen_steps == (1, 8, 27, 64, 125)

    def test_ar_has_no_regens(self):
        trace = timing_benchmark("ar", 100, n_chains=4, seed=1)
        assert trace.regen_steps == ()
        assert trace.per_update_ns.shape == (100,)
        assert np.all(trace.per_update_ns > 0)

    def test_state_probes(self):
        trace = timing_benchmark("ar", 200, n_chains=4, seed=1,
                                 probe_steps=(50, 200))
        assert set(trace.state_nbytes) == {50, 200}
        assert trace.state_nbytes[50] == trace.state_nbytes[200]

    def test_timing_rows_cumulative_regens(self):
        trace = timing_benchmark("block", 30, n_chains=4, seed=1)
        rows = timing_rows(trace)
        assert len(rows) == 30
        assert rows[0].regens == 1
        assert rows[7].regens == 2   # t = 8
        assert rows[26].regens == 3  # t = 27
        assert rows[29].regens == 3
        assert all(np.isnan(r.var_est) for r in rows)


class TestRateCheck:
    def test_structure_on_tiny_grid(self):
        result = rate_check(
            beta_grid=(0.3, 0.45), n_grid=(30, 1000),
            scenario=make_scenario("ma0"), replications=8,
            master_seed=5, n_chains=8, workers=1,
        )
        assert set(result.variance_slopes) == {0.3, 0.45}
        assert result.target == 1.0
        assert result.mse_minimizer in (0.3, 0.45)
        assert result.theoretical_variance_slope[0.3] == pytest.approx(-0.7)
        assert result.theoretical_bias_sq_slope[0.3] == pytest.approx(
            -2 * 0.3 / 1.3
        )

    def test_grid_validation(self):
        with pytest.raises(ValueError, match="insufficient grid"):
            rate_check((0.3,), (100, 2000), make_scenario("ma0"),
                       replications=4, n_chains=4)
        with pytest.raises(ValueError):
            rate_check((0.3,), (100, 4000), make_scenario("ma0"),
                       replications=1, n_chains=4)
