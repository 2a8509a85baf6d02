"""
Tests for the Gumbel law, the exact KS distance and the maxima experiment.

Run with: python -m pytest tests/stats/test_gumbel.py
"""

import math

import numpy as np
import pytest

from ZAGFF.core.exceptions import ValidationError
from ZAGFF.services.extremes import normalizing_constants
from ZAGFF.services.greens import lattice_green_origin
from ZAGFF.services.lattice import FieldConfig
from ZAGFF.services.stats import gumbel_cdf, gumbel_experiment, gumbel_ppf, gumbel_report, ks_statistic


def test_gumbel_cdf_values():
    assert gumbel_cdf(0.0) == pytest.approx(0.3678794, abs=1e-7)
    assert gumbel_cdf(-math.log(math.log(2.0))) == pytest.approx(0.5)
    assert gumbel_cdf(10.0) == pytest.approx(0.9999546, abs=1e-7)


def test_gumbel_ppf_inverts_cdf():
    p = np.array([0.01, 0.3, 0.5, 0.9, 0.999])
    assert np.allclose(gumbel_cdf(gumbel_ppf(p)), p)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1])
def test_gumbel_ppf_domain(p):
    with pytest.raises(ValidationError):
        gumbel_ppf(p)


def test_ks_single_sample_at_median():
    assert ks_statistic(np.array([-math.log(math.log(2.0))]), gumbel_cdf) == pytest.approx(0.5)


def test_ks_of_quantile_grid():
    M = 100
    z = gumbel_ppf((np.arange(1, M + 1) - 0.5) / M)
    assert ks_statistic(z, gumbel_cdf) == pytest.approx(0.5 / M, abs=1e-12)


def test_ks_is_order_free(rng):
    z = rng.gumbel(size=50)
    assert ks_statistic(z, gumbel_cdf) == ks_statistic(z[::-1].copy(), gumbel_cdf)


def test_ks_rejects_bad_samples():
    with pytest.raises(ValidationError):
        ks_statistic(np.array([]), gumbel_cdf)
    with pytest.raises(ValidationError):
        ks_statistic(np.array([0.0, np.nan]), gumbel_cdf)


def test_report_on_true_gumbel_samples(rng):
    z = rng.gumbel(size=2000)
    report = gumbel_report(z)
    assert report.replicates == 2000
    assert report.ks_distance < 0.05
    assert report.acceptance["ks_within_band"]
    assert [q.level for q in report.quantile_deviations] == [0.05, 0.25, 0.5, 0.75, 0.95]
    assert abs(report.mean_maximum - 0.5772157) < 0.1


def test_report_flags_shifted_samples(rng):
    report = gumbel_report(rng.gumbel(size=2000) + 1.0)
    assert not report.acceptance["ks_within_band"]


def test_experiment_structure(cfg8, policy):
    constants = normalizing_constants(cfg8.N, lattice_green_origin(3))
    report = gumbel_experiment(cfg8, constants, 100, policy)
    assert report.n == 8 and report.d == 3
    assert report.replicates == 100
    assert 0.0 <= report.ks_distance <= 1.0


def test_experiment_needs_replicates(cfg8, policy):
    constants = normalizing_constants(cfg8.N, lattice_green_origin(3))
    with pytest.raises(ValidationError):
        gumbel_experiment(cfg8, constants, 50, policy)


@pytest.mark.slow
def test_maxima_approach_gumbel_at_n24(policy):
    cfg = FieldConfig(d=3, n=24)
    constants = normalizing_constants(cfg.N, lattice_green_origin(3))
    report = gumbel_experiment(cfg, constants, 2000, policy)
    # Finite-size bias keeps D away from zero; it must still be far below the trivial bound
    assert report.ks_distance < 0.25


@pytest.mark.slow
def test_ks_distance_shrinks_from_n8_to_n24(policy):
    # Same seed streams at both sizes
    distances = {}
    for n in (8, 24):
        cfg = FieldConfig(d=3, n=n)
        constants = normalizing_constants(cfg.N, lattice_green_origin(3))
        distances[n] = gumbel_experiment(cfg, constants, 2000, policy).ks_distance
    assert distances[24] < distances[8]
