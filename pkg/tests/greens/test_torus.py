"""
Tests for the zero-average Green's function on the torus.

Run with: python -m pytest tests/greens/test_torus.py
"""

import numpy as np
import pandas as pd
import pytest

from ZAGFF.core.exceptions import ResourceLimitError, ValidationError
from ZAGFF.services.greens import (
    convergence_report,
    decay_profile_torus,
    eigenvalue_table,
    export_green_table,
    green_table_frame,
    inverse_eigenvalues,
    transition_matrix,
    zero_average_green,
    zero_average_green_dense,
)
from ZAGFF.services.lattice import FieldConfig

GOLDEN_D3 = 1.5163861


def test_small_torus_origin_value(cfg3):
    # (6/0.5 + 12/1 + 8/1.5) / 27
    assert zero_average_green(cfg3).v_n == pytest.approx(1.0864198, abs=1e-7)


def test_eigenvalues_zero_mode(cfg4):
    lam = eigenvalue_table(cfg4)
    assert lam[0, 0, 0] == 0.0
    assert lam.reshape(-1)[1:].min() > 0
    assert lam.max() == pytest.approx(2.0)
    inv = inverse_eigenvalues(lam)
    assert inv[0, 0, 0] == 0.0


@pytest.mark.parametrize("n", [3, 4, 5])
def test_spectral_matches_dense_pseudo_inverse(n):
    cfg = FieldConfig(d=3, n=n)
    table = zero_average_green(cfg)
    assert np.max(np.abs(table.dense() - zero_average_green_dense(cfg))) <= 1e-10


def test_table_invariants(cfg8):
    res = zero_average_green(cfg8).invariant_residuals()
    assert res["row_sum"] <= 1e-10 * cfg8.N
    assert res["symmetry"] <= 1e-12
    assert res["min_nonzero_eigenvalue"] > 0


def test_dense_is_translation_invariant_and_centred(cfg4):
    G = zero_average_green(cfg4).dense()
    assert np.allclose(G, G.T, atol=1e-13)
    assert np.max(np.abs(G.sum(axis=1))) <= 1e-10


def test_dense_solves_laplacian_off_the_mean(cfg4):
    # (I - P) G = I - J / N
    G = zero_average_green(cfg4).dense()
    L = np.eye(cfg4.N) - transition_matrix(cfg4)
    assert np.allclose(L @ G, np.eye(cfg4.N) - 1.0 / cfg4.N, atol=1e-10)


def test_transition_matrix_is_stochastic(cfg3):
    P = transition_matrix(cfg3)
    assert np.allclose(P.sum(axis=1), 1.0)
    assert np.allclose(P, P.T)


def test_dense_refused_above_limit(monkeypatch, cfg8):
    from ZAGFF.core.settings import settings

    monkeypatch.setattr(settings, "dense_max_sites", 100)
    with pytest.raises(ResourceLimitError):
        zero_average_green(cfg8).dense()


def test_value_and_vectorised_lookup(cfg4):
    table = zero_average_green(cfg4)
    assert table.value((5, -1, 0)) == table.value((1, 3, 0))
    at = table.at(np.array([[0, 0, 0], [1, 3, 0]]))
    assert at[0] == table.v_n
    assert at[1] == table.value((1, 3, 0))


def test_perturbed_copy(cfg4):
    table = zero_average_green(cfg4)
    shifted = table.perturbed(1e-3)
    assert shifted.v_n == pytest.approx(table.v_n + 1e-3)
    assert table.v_n != shifted.v_n
    assert shifted.invariant_residuals()["row_sum"] == pytest.approx(1e-3, rel=1e-6)


def test_decay_profile(cfg8):
    table = zero_average_green(cfg8)
    profile = decay_profile_torus(table)
    frame = profile.frame
    assert list(frame.columns) == ["distance", "max_abs_G", "sites"]
    assert frame["distance"].tolist() == list(range(0, 13))
    assert frame["sites"].sum() == cfg8.N
    assert frame["max_abs_G"].iloc[0] == pytest.approx(table.v_n)
    assert profile.c_star > 0


def test_convergence_gaps_decrease():
    report = convergence_report([4, 8, 16], 3)
    gaps = [row.gap for row in report.rows]
    assert report.gaps_decreasing
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert report.rows[0].v == GOLDEN_D3
    assert list(report.to_frame().columns[:5]) == ["n", "v_n", "v", "gap", "bound"]


def test_convergence_rate_up_to_n32():
    report = convergence_report([4, 8, 16, 32], 3)
    rows = {row.n: row for row in report.rows}
    assert report.gaps_decreasing
    assert rows[32].gap <= 0.08
    scaled = [rows[n].gap_times_n for n in (8, 16, 32)]
    assert max(scaled) / min(scaled) - 1.0 < 0.3


def test_decay_profile_tail_shrinks_with_n():
    profiles = [decay_profile_torus(zero_average_green(FieldConfig(d=3, n=n))) for n in (8, 16, 32)]
    tails = [p.max_distance_value for p in profiles]
    assert tails[0] > tails[1] > tails[2]
    assert all(0.0 < p.c_star < np.inf for p in profiles)


def test_convergence_gap_at_n3():
    report = convergence_report([3], 3)
    assert report.rows[0].gap == pytest.approx(0.4299663, abs=1e-6)


def test_convergence_rejects_tiny_n():
    with pytest.raises(ValidationError):
        convergence_report([2, 4], 3)


def test_table_frame_and_export(tmp_path, cfg3):
    table = zero_average_green(cfg3)
    frame = green_table_frame(table)
    assert list(frame.columns) == ["dx_1", "dx_2", "dx_3", "G_value"]
    assert len(frame) == 27
    path = export_green_table(table, tmp_path / "g.csv")
    back = pd.read_csv(path, float_precision="round_trip")
    assert back["G_value"].iloc[0] == pytest.approx(1.0864198, abs=1e-7)
    assert np.array_equal(back["G_value"].to_numpy(), table.values.reshape(-1))
