"""
Tests for the combined extremes sweep.

Run with: python -m pytest tests/stats/test_suite.py
"""

import numpy as np
import pytest

from ZAGFF.core.exceptions import ValidationError
from ZAGFF.services.extremes import exceedance_count, field_maximum, normalizing_constants
from ZAGFF.services.greens import lattice_green_origin
from ZAGFF.services.lattice import FieldConfig
from ZAGFF.services.sampler import sample_field
from ZAGFF.services.stats import IndicatorFunction, run_extremes_suite


def test_frame_matches_direct_reductions(cfg8, constants8, policy):
    result = run_extremes_suite(cfg8, constants8, 100, policy, delta=0.0)
    frame = result.replicate_frame
    assert list(frame.columns) == [
        "replicate", "seed", "max_raw", "max_rescaled", "count", "laplace_eta", "boundary_hit",
    ]
    assert len(frame) == 100
    for i in (0, 57, 99):
        field = sample_field(cfg8, policy.stream_seed(i))
        assert int(frame["seed"].iloc[i]) == policy.stream_seed(i)
        assert frame["max_rescaled"].iloc[i] == field_maximum(field, constants8).rescaled
        assert frame["count"].iloc[i] == exceedance_count(field, constants8, 0.0)
        assert frame["laplace_eta"].iloc[i] == float(exceedance_count(field, constants8, 0.0))


def test_report_shares_replicates(cfg8, constants8, policy):
    report = run_extremes_suite(cfg8, constants8, 100, policy).report
    assert report.gumbel.replicates == report.poisson.replicates == report.laplace.replicates == 100
    assert report.boundary is None
    assert set(report.acceptance) == {
        "gumbel.ks_within_band",
        "poisson.mean_near_limit",
        "poisson.dispersion_within_band",
        "poisson.correlation_within_band",
        "poisson.mean_matches_finite_n",
        "laplace.within_se_of_limit",
    }
    assert report.master_seed == policy.master_seed


def test_independent_of_workers(cfg8, constants8, policy, threads):
    serial = run_extremes_suite(cfg8, constants8, 120, policy, workers=1)
    pooled = run_extremes_suite(cfg8, constants8, 120, policy, workers=threads)
    assert serial.replicate_frame.equals(pooled.replicate_frame)
    assert serial.report == pooled.report


def test_custom_test_function_and_split(cfg8, constants8, policy):
    f = IndicatorFunction(c=2.0, delta=0.5, lo=[0, 0, 0], hi=[0.5, 1, 1])
    report = run_extremes_suite(cfg8, constants8, 100, policy, split=[2, 2, 2], test_function=f).report
    assert report.laplace.theoretical == pytest.approx(f.limit_value())
    assert len(report.poisson.cell_means) == 8


def test_support_below_floor_rejected(cfg8, constants8, policy):
    with pytest.raises(ValidationError):
        run_extremes_suite(cfg8, constants8, 100, policy, delta=-3.0, floor=-2.0)
    f = IndicatorFunction(c=1.0, delta=-5.0)
    with pytest.raises(ValidationError):
        run_extremes_suite(cfg8, constants8, 100, policy, test_function=f, floor=-2.0)


def test_too_few_replicates(cfg8, constants8, policy):
    with pytest.raises(ValidationError):
        run_extremes_suite(cfg8, constants8, 10, policy)


@pytest.mark.slow
def test_desk_scale_run_at_n24():
    cfg = FieldConfig(d=3, n=24)
    constants = normalizing_constants(cfg.N, lattice_green_origin(3))
    from ZAGFF.services.sampler import SeedPolicy

    result = run_extremes_suite(cfg, constants, 2000, SeedPolicy(master_seed=7))
    report = result.report
    assert report.boundary is not None
    assert report.acceptance["poisson.mean_matches_finite_n"]
    assert report.acceptance["boundary.within_union_bound"]
    assert report.gumbel.ks_distance < 0.25
    assert np.all(result.replicate_frame["count"] >= 0)
