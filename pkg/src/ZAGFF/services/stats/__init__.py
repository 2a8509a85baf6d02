"""
Statistical checks of the extremal process.

Exports:
    gumbel_cdf, gumbel_ppf, ks_statistic: Gumbel law and exact KS distance
    gumbel_experiment, GumbelReport: fit of normalized maxima
    poisson_experiment, PoissonReport, dispersion_index: exceedance counts
    laplace_experiment, IndicatorFunction, LaplaceReport: Laplace functionals
    boundary_exceedance_rate, BoundaryReport: boundary-layer exceedances
    synthetic_poisson_pattern: draws of the limit Poisson measure
    run_extremes_suite: all four experiments on one sweep
    AcceptanceBands: pass/fail thresholds
"""

from .bands import DEFAULT_BANDS, AcceptanceBands
from .boundary import BoundaryReport, boundary_exceedance_rate, boundary_report, require_bulk
from .gumbel import (
    GumbelReport,
    QuantileDeviation,
    gumbel_cdf,
    gumbel_experiment,
    gumbel_ppf,
    gumbel_report,
    ks_statistic,
)
from .laplace import IndicatorFunction, LaplaceReport, laplace_experiment, laplace_report
from .poisson import (
    PoissonReport,
    cell_labels,
    dispersion_index,
    finite_n_mean_count,
    finite_n_oracles,
    max_abs_correlation,
    poisson_experiment,
    poisson_report,
    synthetic_poisson_pattern,
)
from .suite import ExtremesSuite, SuiteResult, run_extremes_suite
from .sweep import check_replicates, sweep_fields

__all__ = [
    "DEFAULT_BANDS",
    "AcceptanceBands",
    "BoundaryReport",
    "ExtremesSuite",
    "GumbelReport",
    "IndicatorFunction",
    "LaplaceReport",
    "PoissonReport",
    "QuantileDeviation",
    "SuiteResult",
    "boundary_exceedance_rate",
    "boundary_report",
    "cell_labels",
    "check_replicates",
    "dispersion_index",
    "finite_n_mean_count",
    "finite_n_oracles",
    "gumbel_cdf",
    "gumbel_experiment",
    "gumbel_ppf",
    "gumbel_report",
    "ks_statistic",
    "laplace_experiment",
    "laplace_report",
    "max_abs_correlation",
    "poisson_experiment",
    "poisson_report",
    "require_bulk",
    "run_extremes_suite",
    "sweep_fields",
    "synthetic_poisson_pattern",
]
