"""
Tests for the exact spectral sampler and the dense covariance oracle.

Run with: python -m pytest tests/sampler/test_spectral.py
"""

import numpy as np
import pytest
import scipy.stats

from ZAGFF.core.exceptions import ResourceLimitError, ValidationError
from ZAGFF.services.greens import zero_average_green
from ZAGFF.services.lattice import FieldConfig, all_sites
from ZAGFF.services.sampler import (
    SeedPolicy,
    covariance_factor,
    dense_sample_oracle,
    empirical_covariance,
    iter_batch,
    make_generator,
    mode_layout,
    sample_batch,
    sample_field,
    stack_fields,
)


class TestModeLayout:
    @pytest.mark.parametrize("n, self_conjugate", [(4, 7), (5, 0), (6, 7)])
    def test_partition_of_nonzero_modes(self, n, self_conjugate):
        cfg = FieldConfig(d=3, n=n)
        layout = mode_layout(cfg)
        assert layout.self_conjugate.size == self_conjugate
        assert 2 * layout.representatives.size + layout.self_conjugate.size + 1 == cfg.N
        covered = np.concatenate([layout.representatives, layout.partners, layout.self_conjugate])
        assert np.array_equal(np.sort(covered), np.arange(1, cfg.N))

    def test_sigma_zero_mode(self, cfg4):
        layout = mode_layout(cfg4)
        assert layout.sigma[0, 0, 0] == 0.0
        assert np.all(layout.sigma.reshape(-1)[1:] > 0)


class TestSampleField:
    def test_zero_sum(self, cfg8, policy):
        for i in range(16):
            assert sample_field(cfg8, policy.stream_seed(i)).sum_residual() <= 1e-9

    def test_real_and_shaped(self, cfg8):
        field = sample_field(cfg8, 11)
        assert field.values.shape == cfg8.shape
        assert field.values.dtype == np.float64
        assert np.all(np.isfinite(field.values))
        assert field.seed == 11

    def test_deterministic_in_seed(self, cfg8):
        a = sample_field(cfg8, 42)
        b = sample_field(cfg8, 42)
        c = sample_field(cfg8, 43)
        assert np.array_equal(a.values, b.values)
        assert not np.array_equal(a.values, c.values)

    def test_values_are_read_only(self, cfg4):
        field = sample_field(cfg4, 1)
        with pytest.raises(ValueError):
            field.values[0, 0, 0] = 1.0

    def test_table_for_another_torus_rejected(self, cfg4, cfg8):
        with pytest.raises(ValidationError):
            sample_field(cfg8, 1, table=zero_average_green(cfg4))

    def test_empirical_covariance_matches_green(self, cfg4, policy):
        fields = sample_batch(cfg4, policy, 4000)
        cov, se = empirical_covariance(stack_fields(fields))
        G = zero_average_green(cfg4).dense()
        assert np.all(np.abs(cov - G) <= 6.0 * se + 1e-12)

    def test_batch_independent_of_workers(self, cfg4, policy, threads):
        serial = sample_batch(cfg4, policy, 40, workers=1)
        pooled = list(iter_batch(cfg4, policy, 40, workers=threads))
        assert [f.seed for f in serial] == [policy.stream_seed(i) for i in range(40)]
        for a, b in zip(serial, pooled):
            assert np.array_equal(a.values, b.values)


def reference_field(cfg, seed):
    """Field rebuilt from the seed's normals with an explicit DFT sum."""
    k = all_sites(cfg)
    flat = np.arange(cfg.N)
    conj = np.ravel_multi_index(tuple((-k % cfg.n).T), cfg.shape)
    reps = flat[flat < conj]
    self_conj = flat[(flat == conj) & (flat != 0)]
    lam = 1.0 - np.cos(2 * np.pi * k / cfg.n).mean(axis=1)

    z = make_generator(seed).standard_normal(2 * reps.size + self_conj.size)
    a, b = z[:reps.size], z[reps.size:2 * reps.size]
    amp = np.zeros(cfg.N, dtype=np.complex128)
    amp[reps] = (a + 1j * b) / np.sqrt(2.0)
    amp[conj[reps]] = (a - 1j * b) / np.sqrt(2.0)
    amp[self_conj] = z[2 * reps.size:]
    amp[1:] /= np.sqrt(lam[1:])

    phase = np.exp(2j * np.pi * (k @ k.T) / cfg.n)
    return ((phase @ amp) / np.sqrt(cfg.N)).reshape(cfg.shape)


class TestPinnedDraws:
    @pytest.mark.parametrize("n, seed", [(4, 0), (4, 0xE220A8397B1DCDAF), (5, 17), (6, 3)])
    def test_field_rebuilt_from_seed(self, n, seed):
        cfg = FieldConfig(d=3, n=n)
        expected = reference_field(cfg, seed)
        assert np.max(np.abs(expected.imag)) <= 1e-12
        assert np.allclose(sample_field(cfg, seed).values, expected.real, rtol=0, atol=1e-12)

    def test_batch_fields_use_stream_seeds(self, cfg4):
        policy = SeedPolicy(master_seed=0)
        for i, field in enumerate(iter_batch(cfg4, policy, 3)):
            assert np.allclose(field.values, reference_field(cfg4, policy.stream_seed(i)).real, rtol=0, atol=1e-12)


def assert_zero_sum(draws, rng):
    for _ in range(draws):
        cfg = FieldConfig(d=3, n=int(rng.integers(2, 17)))
        seed = int(rng.integers(0, 2**63))
        field = sample_field(cfg, seed)
        assert field.sum_residual() <= 1e-9, (cfg.n, seed)


def test_zero_sum_over_random_configs(rng):
    assert_zero_sum(300, rng)


@pytest.mark.slow
def test_zero_sum_over_many_configs(rng):
    assert_zero_sum(10_000, rng)


@pytest.mark.slow
class TestMomentsAtScale:
    """Second moments and Gaussianity at n=6 over 50,000 fields."""

    M = 50_000
    DISPLACEMENTS = [
        (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (2, 0, 0),
        (1, 1, 1), (2, 1, 0), (3, 0, 0), (2, 2, 1), (3, 3, 3),
    ]

    @pytest.fixture(scope="class")
    def samples(self):
        cfg = FieldConfig(d=3, n=6)
        policy = SeedPolicy(master_seed=606)
        origin = np.empty(self.M)
        others = np.empty((self.M, len(self.DISPLACEMENTS)))
        index = tuple(np.array(self.DISPLACEMENTS).T)
        for i, field in enumerate(iter_batch(cfg, policy, self.M)):
            origin[i] = field.values[0, 0, 0]
            others[i] = field.values[index]
        return cfg, origin, others

    def test_site_variance(self, samples):
        cfg, origin, _ = samples
        v_n = zero_average_green(cfg).v_n
        assert abs(np.mean(origin ** 2) - v_n) <= 3 * np.sqrt(2.0 / self.M) * v_n

    def test_covariances_at_fixed_displacements(self, samples):
        cfg, origin, others = samples
        table = zero_average_green(cfg)
        products = origin[:, None] * others
        se = products.std(axis=0, ddof=1) / np.sqrt(self.M)
        expected = np.array([table.value(x) for x in self.DISPLACEMENTS])
        assert np.all(np.abs(products.mean(axis=0) - expected) <= 4 * se)

    def test_marginal_is_standard_normal(self, samples):
        cfg, origin, _ = samples
        standardized = origin / np.sqrt(zero_average_green(cfg).v_n)
        assert scipy.stats.kstest(standardized, "norm").statistic <= 0.01


class TestDenseOracle:
    def test_factor_reproduces_covariance(self, cfg4):
        table = zero_average_green(cfg4)
        F = covariance_factor(cfg4, table)
        assert np.max(np.abs(F @ F.T - table.dense())) <= 1e-8

    def test_oracle_field_has_zero_sum(self, cfg4):
        assert dense_sample_oracle(cfg4, 5).sum_residual() <= 1e-9

    def test_oracle_and_spectral_agree_in_law(self, cfg4, policy):
        M = 4000
        spectral = np.array([sample_field(cfg4, policy.stream_seed(i)).values[0, 0, 0] for i in range(M)])
        dense = np.array([dense_sample_oracle(cfg4, policy.stream_seed(i)).values[0, 0, 0] for i in range(M)])
        v_n = zero_average_green(cfg4).v_n
        se = v_n * np.sqrt(2.0 / M)
        assert abs(np.mean(spectral ** 2) - v_n) <= 5 * se
        assert abs(np.mean(dense ** 2) - v_n) <= 5 * se

    def test_oracle_refused_above_limit(self):
        with pytest.raises(ResourceLimitError):
            covariance_factor(FieldConfig(d=3, n=9))


class TestMoments:
    def test_stack_needs_fields(self):
        with pytest.raises(ValidationError):
            stack_fields([])

    def test_covariance_needs_two_rows(self):
        with pytest.raises(ValidationError):
            empirical_covariance(np.zeros((1, 4)))
