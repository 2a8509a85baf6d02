"""
Gumbel goodness of fit of normalized field maxima.

Module Input:
    - Rescaled replicate maxima (M >= 1), or a field configuration to sample

Module Output:
    - Exact one-sample KS distance against exp(-e^{-z})
    - GumbelReport with per-quantile deviations and acceptance flags
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel

from ...core.exceptions import ValidationError
from ...core.logging_config import get_logger
from ..extremes import NormalizingConstants, field_maximum
from ..lattice import FieldConfig
from ..sampler import SeedPolicy
from .bands import DEFAULT_BANDS, AcceptanceBands
from .sweep import check_replicates, sweep_fields

logger = get_logger(__name__)

QUANTILE_LEVELS = (0.05, 0.25, 0.5, 0.75, 0.95)


def gumbel_cdf(z):
    """exp(-e^{-z}); accepts scalars or arrays."""
    out = np.exp(-np.exp(-np.asarray(z, dtype=np.float64)))
    return float(out) if out.ndim == 0 else out


def gumbel_ppf(p):
    """
    Inverse of gumbel_cdf, -log(-log p).

    Raises:
        ValidationError: If some p is outside (0, 1)
    """
    arr = np.asarray(p, dtype=np.float64)
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise ValidationError("gumbel_ppf needs probabilities in (0, 1)", details={"p": arr.tolist()})
    out = -np.log(-np.log(arr))
    return float(out) if out.ndim == 0 else out


def ks_statistic(samples: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """
    One-sample Kolmogorov-Smirnov distance, evaluated at the ECDF jumps.

        D = max_i max(i/M - F(z_(i)), F(z_(i)) - (i-1)/M)

    Args:
        samples: At least one finite sample
        cdf: Vectorised continuous CDF

    Returns:
        float: D in [0, 1]

    Raises:
        ValidationError: If samples are empty or not finite
    """
    z = np.sort(np.asarray(samples, dtype=np.float64).reshape(-1))
    if z.size == 0:
        raise ValidationError("ks_statistic needs at least one sample", details={})
    if not np.all(np.isfinite(z)):
        raise ValidationError("ks_statistic needs finite samples", details={"samples": int(z.size)})
    M = z.size
    F = np.asarray(cdf(z), dtype=np.float64)
    i = np.arange(1, M + 1)
    d_plus = np.max(i / M - F)
    d_minus = np.max(F - (i - 1) / M)
    return float(max(d_plus, d_minus))


class QuantileDeviation(BaseModel):
    level: float
    empirical: float
    gumbel: float
    deviation: float


class GumbelReport(BaseModel):
    """
    KS fit of rescaled maxima to the Gumbel law.

    Attributes:
        n, d: Geometry (None for synthetic inputs)
        replicates (int): M
        ks_distance (float): D in [0, 1]
        ks_critical_1pct (float): 1.63 / sqrt(M)
        mean_maximum (float): Mean rescaled maximum
        quantile_deviations (list[QuantileDeviation]): Empirical minus Gumbel quantiles
        constants (Optional[NormalizingConstants]): Constants used
        acceptance (dict[str, bool]): `ks_within_band`
    """

    n: Optional[int] = None
    d: Optional[int] = None
    replicates: int
    ks_distance: float
    ks_critical_1pct: float
    mean_maximum: float
    quantile_deviations: list[QuantileDeviation]
    constants: Optional[NormalizingConstants] = None
    acceptance: dict[str, bool]


def gumbel_report(
    maxima: np.ndarray,
    cfg: Optional[FieldConfig] = None,
    constants: Optional[NormalizingConstants] = None,
    bands: AcceptanceBands = DEFAULT_BANDS,
) -> GumbelReport:
    """Aggregate rescaled maxima into a GumbelReport."""
    z = np.asarray(maxima, dtype=np.float64)
    D = ks_statistic(z, gumbel_cdf)
    quantiles = [
        QuantileDeviation(
            level=p,
            empirical=float(np.quantile(z, p)),
            gumbel=gumbel_ppf(p),
            deviation=float(np.quantile(z, p)) - gumbel_ppf(p),
        )
        for p in QUANTILE_LEVELS
    ]
    return GumbelReport(
        n=cfg.n if cfg else None,
        d=cfg.d if cfg else None,
        replicates=int(z.size),
        ks_distance=D,
        ks_critical_1pct=1.63 / np.sqrt(z.size),
        mean_maximum=float(z.mean()),
        quantile_deviations=quantiles,
        constants=constants,
        acceptance={"ks_within_band": D <= bands.ks_max},
    )


def gumbel_experiment(
    cfg: FieldConfig,
    constants: NormalizingConstants,
    replicates: int,
    policy: SeedPolicy,
    bands: AcceptanceBands = DEFAULT_BANDS,
    workers: Optional[int] = None,
) -> GumbelReport:
    """
    Sample fields, collect rescaled maxima, and fit the Gumbel law.

    Args:
        cfg: Torus geometry
        constants: Constants built for cfg.N
        replicates: M >= 100
        policy: Seed derivation; replicate i uses policy.stream_seed(i)
        bands: Acceptance thresholds
        workers: Thread count

    Returns:
        GumbelReport: KS distance and quantile deviations
    """
    check_replicates(replicates)
    maxima = np.array(
        sweep_fields(cfg, policy, replicates, lambda f: field_maximum(f, constants).rescaled, workers, "gumbel")
    )
    report = gumbel_report(maxima, cfg, constants, bands)
    logger.info("Gumbel n=%d d=%d M=%d: D=%.4f", cfg.n, cfg.d, replicates, report.ks_distance)
    return report
