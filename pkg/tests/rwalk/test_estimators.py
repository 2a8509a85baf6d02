"""
Tests for the Monte Carlo exit-time, harmonic-measure and visit-count estimators.

Run with: python -m pytest tests/rwalk/test_estimators.py
"""

import numpy as np
import pytest

from ZAGFF.core.exceptions import UnsupportedDimensionError, ValidationError
from ZAGFF.core.settings import settings
from ZAGFF.services.greens import expected_exit_time, harmonic_measure
from ZAGFF.services.lattice import Region
from ZAGFF.services.rwalk import (
    McEstimate,
    exit_distribution_mc,
    expected_exit_time_mc,
    green_zd_visits_mc,
)
from ZAGFF.services.sampler import SeedPolicy

ORIGIN = (0, 0, 0)
GOLDEN_D3 = 1.5163861


def policy_for(seed: int) -> SeedPolicy:
    return SeedPolicy(master_seed=seed)


def test_mc_estimate_from_samples():
    est = McEstimate.from_samples(np.array([1.0, 2.0, 3.0, 4.0]))
    assert est.mean == 2.5
    assert est.std_error == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2.0)
    assert est.within(2.5 + 2 * est.std_error)
    assert not est.within(2.5 + 4 * est.std_error)


def test_exit_time_matches_exact():
    V = Region.box([1, 1, 1], [4, 4, 4])
    start = (2, 2, 2)
    est = expected_exit_time_mc(start, V, 4000, policy_for(1))
    assert est.replicates == 4000
    assert est.within(expected_exit_time(V, start), k=4.0)


def test_exit_time_independent_of_workers(monkeypatch, threads):
    monkeypatch.setattr(settings, "walk_block_size", 64)
    V = Region.l1_ball(ORIGIN, 3)
    serial = expected_exit_time_mc(ORIGIN, V, 500, policy_for(2), workers=1)
    pooled = expected_exit_time_mc(ORIGIN, V, 500, policy_for(2), workers=threads)
    assert serial == pooled


def test_too_few_replicates():
    with pytest.raises(ValidationError):
        expected_exit_time_mc(ORIGIN, Region.single_site(ORIGIN), 99, policy_for(0))


def test_exit_distribution_single_site():
    dist = exit_distribution_mc(ORIGIN, Region.single_site(ORIGIN), 6000, policy_for(3))
    assert dist.sites.shape == (6, 3)
    assert dist.counts.sum() == 6000
    assert np.all(np.abs(dist.frequencies - 1.0 / 6.0) <= 4 * dist.std_errors)


def test_exit_distribution_matches_harmonic_measure():
    V = Region.l1_ball(ORIGIN, 2)
    start = (1, 0, 0)
    dist = exit_distribution_mc(start, V, 8000, policy_for(4))
    sites, probs = harmonic_measure(V, start)
    assert np.array_equal(dist.sites, sites)
    assert np.all(np.abs(dist.frequencies - probs) <= 4 * np.sqrt(probs * (1 - probs) / 8000) + 1e-3)


def test_exit_distribution_from_outside():
    dist = exit_distribution_mc((4, 0, 0), Region.single_site(ORIGIN), 100, policy_for(5))
    assert dist.sites.tolist() == [[4, 0, 0]]
    assert dist.counts.tolist() == [100]


def test_visits_reject_low_dimension():
    with pytest.raises(UnsupportedDimensionError):
        green_zd_visits_mc(2, 100, policy_for(0))


def test_visits_reject_odd_horizon():
    with pytest.raises(ValidationError):
        green_zd_visits_mc(3, 100, policy_for(0), horizon=11)


@pytest.mark.slow
def test_visit_count_estimate_of_golden_constant():
    est = green_zd_visits_mc(3, 4000, policy_for(6), horizon=2000)
    assert est.within(GOLDEN_D3, k=4.0)
