import numpy as np
import pytest
from mpmath import mp, mpf, power

from streamboot.weights import (
    BETA_DEFAULT,
    ArWeightState,
    ar_next,
    ar_weight_cov,
    block_gamma_shape,
    block_kernel,
    block_regenerate,
    block_size,
    chain_generator,
    iid_next,
    rho,
)

mp.dps = 50

BETA_TEST = 0.41421356


def mp_rho(t, beta):
    return float(1 - power(t, -mpf(repr(beta))))


class TestRho:
    @pytest.mark.parametrize("beta", [0.05, 0.25, BETA_TEST, 0.49])
    def test_first_step_is_zero(self, beta):
        assert rho(1, beta) == 0.0

    def test_frozen_value(self):
        # high-precision oracle: 1 - 1024**(-0.41421356)
        expected = 0.9433639523734969
        assert rho(1024, BETA_TEST) == pytest.approx(expected, abs=1e-15)
        assert rho(1024, BETA_TEST) == pytest.approx(mp_rho(1024, BETA_TEST), abs=1e-15)

    def test_default_beta_is_full_precision(self):
        assert BETA_DEFAULT == np.sqrt(2.0) - 1.0

    def test_strictly_increasing_to_one(self):
        ts = np.arange(1, 2000)
        vals = rho(ts, BETA_TEST)
        assert np.all(np.diff(vals) > 0)
        assert vals[0] == 0.0
        assert vals[-1] < 1.0
        assert rho(10**14, BETA_TEST) > 0.99999

    @pytest.mark.parametrize("beta", [0.0, 0.5, -0.1, 0.6, 1.0])
    def test_beta_outside_open_interval_rejected(self, beta):
        # boundary values are rejected, not clamped (0.5 would give
        # rho(4) = 0.5 but is outside the admissible open interval)
        with pytest.raises(ValueError):
            rho(4, beta)

    def test_step_below_one_rejected(self):
        with pytest.raises(ValueError):
            rho(0, BETA_TEST)


class TestArNext:
    @pytest.mark.parametrize("zeta", [-2.0, 0.0, 0.3, 5.0])
    @pytest.mark.parametrize("beta", [0.1, BETA_TEST, 0.49])
    def test_first_weight_is_one_plus_noise(self, zeta, beta):
        state = ar_next(ArWeightState(), zeta, beta)
        assert state.t == 1
        assert state.v == pytest.approx(1.0 + zeta, abs=0)

    def test_mean_is_fixed_point(self):
        state = ArWeightState(t=17, v=1.0)
        for _ in range(5):
            state = ar_next(state, 0.0, BETA_TEST)
            assert state.v == 1.0

    def test_frozen_value(self):
        # 1 + (1 - 2**-beta) * 0.5, oracle-checked
        state = ar_next(ArWeightState(t=1, v=1.5), 0.0, BETA_TEST)
        assert state.v == pytest.approx(1.1247857721363268, abs=1e-15)
        assert state.v == pytest.approx(1 + mp_rho(2, BETA_TEST) * 0.5, abs=1e-15)

    def test_step_counter_advances(self):
        state = ArWeightState()
        for expected_t in range(1, 6):
            state = ar_next(state, 0.1, BETA_TEST)
            assert state.t == expected_t

    def test_negative_step_rejected(self):
        with pytest.raises(ValueError):
            ArWeightState(t=-1)


class TestArWeightCov:
    @pytest.mark.parametrize("i", [1, 5, 100])
    @pytest.mark.parametrize("beta", [0.1, BETA_TEST])
    def test_lag_zero_is_exactly_one(self, i, beta):
        assert ar_weight_cov(i, 0, beta) == 1.0

    def test_frozen_values(self):
        assert ar_weight_cov(1, 1, BETA_TEST) == pytest.approx(
            0.24957154427265358, abs=1e-15
        )
        assert ar_weight_cov(1, 2, BETA_TEST) == pytest.approx(
            0.09124090224067334, abs=1e-15
        )

    def test_against_high_precision_product(self):
        for i, h in [(1, 3), (7, 5), (40, 20)]:
            expected = float(
                np.prod([mp_rho(i + k, BETA_TEST) for k in range(1, h + 1)])
            )
            assert ar_weight_cov(i, h, BETA_TEST) == pytest.approx(expected, rel=1e-13)

    def test_nonincreasing_in_lag(self):
        vals = [ar_weight_cov(10, h, BETA_TEST) for h in range(0, 40)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_nondecreasing_in_start_index(self):
        vals = [ar_weight_cov(i, 7, BETA_TEST) for i in range(1, 200)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_bounded_in_unit_interval(self):
        for i in (1, 3, 50):
            for h in (0, 1, 10, 100):
                v = ar_weight_cov(i, h, BETA_TEST)
                assert 0.0 <= v <= 1.0

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            ar_weight_cov(0, 1, BETA_TEST)
        with pytest.raises(ValueError):
            ar_weight_cov(1, -1, BETA_TEST)
        with pytest.raises(ValueError):
            ar_weight_cov(1, 1, 0.5)


class TestIidNext:
    def test_affine_shift(self):
        assert iid_next(0.0) == 1.0
        assert iid_next(2.5) == 3.5
        assert iid_next(-1.0) == 0.0

    def test_monte_carlo_mean(self):
        rng = np.random.default_rng(1904)
        draws = iid_next(rng.standard_normal(10**6))
        # 4 sigma band, se = 1/sqrt(1e6)
        assert abs(draws.mean() - 1.0) < 0.004
        assert abs(draws.var() - 1.0) < 0.006


class TestBlockSize:
    def test_small_values(self):
        assert block_size(1) == 1
        assert block_size(7) == 1
        assert block_size(8) == 2
        assert block_size(999) == 9
        assert block_size(1000) == 10

    def test_exact_cube_root_over_range(self):
        for n in range(1, 30000):
            m = block_size(n)
            assert m ** 3 <= n < (m + 1) ** 3

    def test_large_cubes_hit_exactly(self):
        # guards against float cube-root rounding at boundaries
        for k in (99, 100, 101, 1290, 4096):
            assert block_size(k ** 3) == k
            assert block_size(k ** 3 - 1) == k - 1

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            block_size(0)


class TestBlockGammaShape:
    def test_collapses_to_one_at_unit_block(self):
        assert block_gamma_shape(1) == pytest.approx(1.0, abs=0)

    def test_m10(self):
        # 2/30 + 1/300
        assert block_gamma_shape(10) == pytest.approx(0.07, abs=1e-15)

    def test_small_shapes_positive(self):
        for m in range(1, 200):
            assert block_gamma_shape(m) > 0.0


class TestBlockKernel:
    def test_unit_block_collapses(self):
        assert np.allclose(block_kernel(1), [0.0, 1.0, 0.0])

    @pytest.mark.parametrize("m", [1, 2, 5, 10, 20])
    def test_sums_to_one_and_symmetric(self, m):
        k = block_kernel(m)
        assert k.shape == (2 * m + 1,)
        assert k.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(k, k[::-1])


def _theoretical_block_variance(m: int) -> float:
    # Var(V) = (sum_j b_j^2) / q = (2m^2 + 1) / (2m^2 + m)
    return (2.0 * m * m + 1.0) / (2.0 * m * m + m)


class TestBlockRegenerate:
    def test_unit_block_returns_innovations(self):
        rng = np.random.default_rng(5)
        z = rng.gamma(1.0, 1.0, size=12 + 3)
        out = block_regenerate(12, 1, z)
        assert out.m_used == 1
        # kernel collapses: weight i equals innovation i
        assert np.allclose(out.weights, z[2:14])

    def test_matches_direct_kernel_sum(self):
        rng = np.random.default_rng(6)
        n, m = 40, 3
        q = block_gamma_shape(m)
        z = rng.gamma(q, 1.0 / q, size=n + 2 * m + 1)
        out = block_regenerate(n, m, z)
        kern = block_kernel(m)
        for i in range(1, n + 1):
            # innovations index i-j+m for j = -m..m
            expected = sum(
                kern[j + m] * z[i - j + m] for j in range(-m, m + 1)
            )
            assert out.weights[i - 1] == pytest.approx(expected, rel=1e-12)

    def test_wrong_innovation_count_rejected(self):
        with pytest.raises(ValueError):
            block_regenerate(10, 2, np.ones(10))

    @pytest.mark.parametrize("m", [5, 10, 20])
    def test_moments_match_construction(self, m):
        # Exact per-weight variance is (2m^2+1)/(2m^2+m): 0.9273, 0.9571,
        # 0.9768 for m = 5, 10, 20, approaching 1 as the block grows.
        rng = np.random.default_rng(100 + m)
        n = 400_000
        q = block_gamma_shape(m)
        z = rng.gamma(q, 1.0 / q, size=n + 2 * m + 1)
        w = block_regenerate(n, m, z).weights
        var_target = _theoretical_block_variance(m)
        # weights are (2m)-dependent: widen the plain MC standard errors
        se_mean = np.sqrt(var_target * (2 * m + 1) / n)
        se_var = var_target * np.sqrt(2.0 * (2 * m + 1) / n)
        assert abs(w.mean() - 1.0) < 4 * se_mean
        assert abs(w.var() - var_target) < 4 * se_var

    def test_variance_approaches_one(self):
        vals = [_theoretical_block_variance(m) for m in (5, 10, 20, 100)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 0.995


class TestChainGenerator:
    def test_same_seed_bit_identical(self):
        a = chain_generator(42, 3).standard_normal(100)
        b = chain_generator(42, 3).standard_normal(100)
        assert np.array_equal(a, b)

    def test_chains_are_distinct(self):
        a = chain_generator(42, 0).standard_normal(100)
        b = chain_generator(42, 1).standard_normal(100)
        assert not np.allclose(a, b)

    def test_master_seeds_are_distinct(self):
        a = chain_generator(1, 0).standard_normal(100)
        b = chain_generator(2, 0).standard_normal(100)
        assert not np.allclose(a, b)
