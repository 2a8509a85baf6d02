"""
Poisson structure of high exceedances.

Per replicate the number of sites above u_N(delta) is counted overall and
per cell of a congruent split of [0, 1)^d. In the limit the counts are
Poisson with mean e^{-delta} |cell| and independent across cells.

The exact finite-N mean is N * P(Psi(0) > u_N(delta)) with Psi(0) ~ N(0, v_n),
by linearity of expectation whatever the dependence between sites.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
import scipy.stats
from pydantic import BaseModel

from ...core.exceptions import ValidationError
from ...core.logging_config import get_logger
from ..extremes import NormalizingConstants, PointPattern, rescale, threshold
from ..greens import zero_average_green
from ..lattice import FieldConfig
from ..sampler import SeedPolicy
from .bands import DEFAULT_BANDS, AcceptanceBands
from .sweep import check_replicates, sweep_fields

logger = get_logger(__name__)


def dispersion_index(counts: np.ndarray) -> float:
    """
    Variance-to-mean ratio of counts (1 for Poisson).

    Returns 0 when every count is zero.
    """
    x = np.asarray(counts, dtype=np.float64)
    if x.size < 2:
        raise ValidationError("dispersion_index needs at least two counts", details={"size": int(x.size)})
    mean = x.mean()
    return float(x.var(ddof=1) / mean) if mean > 0 else 0.0


def max_abs_correlation(cell_counts: np.ndarray) -> float:
    """
    Largest |Pearson correlation| between distinct cell-count columns.

    Columns without variance are treated as uncorrelated.
    """
    X = np.asarray(cell_counts, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] < 2:
        return 0.0
    ok = X.std(axis=0) > 0
    if ok.sum() < 2:
        return 0.0
    corr = np.corrcoef(X[:, ok], rowvar=False)
    off = corr[~np.eye(corr.shape[0], dtype=bool)]
    return float(np.max(np.abs(off)))


def cell_labels(cfg: FieldConfig, split: Sequence[int]) -> np.ndarray:
    """
    Cell index of every site for a split of [0, 1)^d into prod(split) congruent boxes.

    Raises:
        ValidationError: If split has the wrong length or does not divide n
    """
    parts = [int(s) for s in split]
    if len(parts) != cfg.d or any(s < 1 or cfg.n % s for s in parts):
        raise ValidationError(
            f"split {parts} must have {cfg.d} entries dividing n={cfg.n}",
            details={"split": parts, "n": cfg.n, "d": cfg.d},
        )
    grids = np.indices(cfg.shape)
    cells = [grids[j] * parts[j] // cfg.n for j in range(cfg.d)]
    return np.ravel_multi_index(tuple(cells), tuple(parts)).reshape(-1)


def finite_n_mean_count(N: int, u: float, variance: float) -> float:
    """N * P(N(0, variance) > u), via the Gaussian survival function."""
    return float(N * scipy.stats.norm.sf(u / math.sqrt(variance)))


class PoissonReport(BaseModel):
    """
    Exceedance counts above u_N(delta).

    Attributes:
        delta (float): Level
        replicates (int): M
        counts (list[int]): Per-replicate counts
        mean (float): Empirical mean count
        std_error (float): Standard error of the mean
        dispersion (float): Variance / mean
        limit_mean (float): e^{-delta}
        finite_n_mean (Optional[float]): N P(N(0, v_n) > u_N(delta))
        finite_n_mean_v (Optional[float]): Same with v in place of v_n
        split (list[int]): Cells per axis
        cell_means (list[float]): Mean count per cell
        max_abs_correlation (float): Largest |correlation| between cell counts
        acceptance (dict[str, bool]): Band flags
    """

    n: Optional[int] = None
    d: Optional[int] = None
    delta: float
    replicates: int
    counts: list[int]
    mean: float
    std_error: float
    dispersion: float
    limit_mean: float
    finite_n_mean: Optional[float] = None
    finite_n_mean_v: Optional[float] = None
    split: list[int]
    cell_means: list[float]
    max_abs_correlation: float
    acceptance: dict[str, bool]


def poisson_report(
    counts: np.ndarray,
    cell_counts: np.ndarray,
    delta: float,
    split: Sequence[int],
    finite_n_mean: Optional[float] = None,
    finite_n_mean_v: Optional[float] = None,
    cfg: Optional[FieldConfig] = None,
    bands: AcceptanceBands = DEFAULT_BANDS,
) -> PoissonReport:
    """Aggregate per-replicate counts into a PoissonReport."""
    x = np.asarray(counts, dtype=np.int64)
    cells = np.asarray(cell_counts, dtype=np.int64).reshape(x.size, -1)
    mean = float(x.mean())
    se = float(x.std(ddof=1) / math.sqrt(x.size))
    dispersion = dispersion_index(x)
    corr = max_abs_correlation(cells)
    limit = math.exp(-delta)

    acceptance = {
        "mean_near_limit": abs(mean - limit) <= bands.limit_mean_tol,
        "dispersion_within_band": bands.dispersion_lo <= dispersion <= bands.dispersion_hi,
        "correlation_within_band": corr <= bands.correlation_max,
    }
    if finite_n_mean is not None:
        acceptance["mean_matches_finite_n"] = abs(mean - finite_n_mean) <= bands.se_multiple * se

    return PoissonReport(
        n=cfg.n if cfg else None,
        d=cfg.d if cfg else None,
        delta=delta,
        replicates=int(x.size),
        counts=x.tolist(),
        mean=mean,
        std_error=se,
        dispersion=dispersion,
        limit_mean=limit,
        finite_n_mean=finite_n_mean,
        finite_n_mean_v=finite_n_mean_v,
        split=[int(s) for s in split],
        cell_means=cells.mean(axis=0).tolist(),
        max_abs_correlation=corr,
        acceptance=acceptance,
    )


def finite_n_oracles(cfg: FieldConfig, constants: NormalizingConstants, delta: float) -> tuple[float, float]:
    """Finite-N mean counts with the exact marginal variance v_n and with v."""
    u = threshold(constants, delta)
    v_n = zero_average_green(cfg).v_n
    return finite_n_mean_count(cfg.N, u, v_n), finite_n_mean_count(cfg.N, u, constants.v)


def poisson_experiment(
    cfg: FieldConfig,
    constants: NormalizingConstants,
    delta: float,
    replicates: int,
    policy: SeedPolicy,
    split: Optional[Sequence[int]] = None,
    bands: AcceptanceBands = DEFAULT_BANDS,
    workers: Optional[int] = None,
) -> PoissonReport:
    """
    Count exceedances of u_N(delta) over sampled fields.

    Args:
        cfg: Torus geometry
        constants: Constants built for cfg.N
        delta: Level
        replicates: M >= 100
        policy: Seed derivation
        split: Cells per axis (default halves along the first axis)
        bands: Acceptance thresholds
        workers: Thread count

    Returns:
        PoissonReport: Counts, dispersion, correlation and oracle comparisons
    """
    check_replicates(replicates)
    split = list(split) if split is not None else [2] + [1] * (cfg.d - 1)
    labels = cell_labels(cfg, split)
    n_cells = int(np.prod(split))

    def reduce(field) -> np.ndarray:
        above = rescale(field.flat, constants) > delta
        return np.bincount(labels[above], minlength=n_cells)

    cells = np.vstack(sweep_fields(cfg, policy, replicates, reduce, workers, "poisson"))
    exact, with_v = finite_n_oracles(cfg, constants, delta)
    report = poisson_report(cells.sum(axis=1), cells, delta, split, exact, with_v, cfg, bands)
    logger.info(
        "Poisson n=%d delta=%.2f M=%d: mean=%.4f (finite-N %.4f, limit %.4f) dispersion=%.4f",
        cfg.n, delta, replicates, report.mean, exact, report.limit_mean, report.dispersion,
    )
    return report


def synthetic_poisson_pattern(d: int, rng: np.random.Generator, floor: float = 0.0) -> PointPattern:
    """
    One draw of the limiting Poisson measure restricted to heights above floor.

    Count ~ Poisson(e^{-floor}), locations uniform on [0, 1)^d, heights
    floor + Exp(1).
    """
    k = int(rng.poisson(math.exp(-floor)))
    locations = rng.random((k, d))
    heights = floor + rng.exponential(1.0, size=k)
    return PointPattern(float(floor), locations, heights)
