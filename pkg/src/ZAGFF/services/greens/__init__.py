"""
Green's functions of the simple random walk.

Exports:
    green_zd, lattice_green_origin, green_zd_series: Z^d Green's function and oracles
    KilledGreenSolve, killed_green, harmonic_measure, expected_exit_time: killed walks
    GreenTable, zero_average_green, zero_average_green_dense: torus Green's function
    decay_profile_torus, convergence_report: torus decay and v_n -> v
    verify_spatial_markov_zd, verify_markov_decomposition_torus,
    verify_center_decomposition: identity residual checks

Example:
    from ZAGFF.services.greens import zero_average_green
    from ZAGFF.services.lattice import FieldConfig

    table = zero_average_green(FieldConfig(d=3, n=8))
    print(table.v_n)
"""

from .identities import (
    TORUS_IDENTITY_TOL,
    ZD_IDENTITY_TOL,
    CenterDecomposition,
    verify_center_decomposition,
    verify_markov_decomposition_torus,
    verify_spatial_markov_zd,
)
from .killed import (
    KilledGreenSolve,
    expected_exit_time,
    exit_time_bound,
    harmonic_measure,
    killed_green,
)
from .torus import (
    ConvergenceReport,
    ConvergenceRow,
    DecayProfile,
    GreenTable,
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
from .zd import (
    GREEN_ZD_ACCURACY,
    QuadratureResult,
    canonical_displacement,
    green_zd,
    green_zd_quadrature,
    green_zd_series,
    lattice_green_origin,
    return_probability_d3,
)

__all__ = [
    "GREEN_ZD_ACCURACY",
    "TORUS_IDENTITY_TOL",
    "ZD_IDENTITY_TOL",
    "CenterDecomposition",
    "ConvergenceReport",
    "ConvergenceRow",
    "DecayProfile",
    "GreenTable",
    "KilledGreenSolve",
    "QuadratureResult",
    "canonical_displacement",
    "convergence_report",
    "decay_profile_torus",
    "eigenvalue_table",
    "expected_exit_time",
    "exit_time_bound",
    "export_green_table",
    "green_table_frame",
    "green_zd",
    "green_zd_quadrature",
    "green_zd_series",
    "harmonic_measure",
    "inverse_eigenvalues",
    "killed_green",
    "lattice_green_origin",
    "return_probability_d3",
    "transition_matrix",
    "verify_center_decomposition",
    "verify_markov_decomposition_torus",
    "verify_spatial_markov_zd",
    "zero_average_green",
    "zero_average_green_dense",
]
