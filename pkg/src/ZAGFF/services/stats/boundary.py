"""
High values in the boundary layer V_n minus R_n.

The rate is the fraction of replicates with some boundary-layer site whose
rescaled value exceeds delta. It is dominated by the union bound

    |V_n minus R_n| * P(N(0, v_n) > u_N(delta)),

and the Gaussian tail itself by phi(t)/t (reported alongside).
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
import scipy.stats
from pydantic import BaseModel

from ...core.exceptions import ValidationError
from ...core.logging_config import get_logger
from ..extremes import NormalizingConstants, rescale, threshold
from ..greens import zero_average_green
from ..lattice import FieldConfig, boundary_layer_approx, bulk_bounds, bulk_region_mask
from ..sampler import SeedPolicy
from .bands import DEFAULT_BANDS, AcceptanceBands
from .sweep import check_replicates, sweep_fields

logger = get_logger(__name__)


def gaussian_tail_bound(t: float) -> float:
    # P(Z > t) <= phi(t) / t for t > 0
    return float(scipy.stats.norm.pdf(t) / t) if t > 0 else 1.0


class BoundaryReport(BaseModel):
    """
    Boundary-layer exceedance rate.

    Attributes:
        n, d: Geometry
        delta (float): Level
        beta (Optional[float]): Bulk exponent (None for the configured default)
        replicates (int): M
        rate (float): Fraction of replicates with a boundary-layer exceedance
        std_error (float): sqrt(rate (1 - rate) / M)
        boundary_sites (int): |V_n minus R_n|
        boundary_sites_approx (float): n^d - (n - 2 n^beta)^d
        v_n (float): G_T(0, 0)
        union_bound (float): boundary_sites * P(N(0, v_n) > u_N(delta))
        union_bound_mills (float): Same with the Mills-ratio tail bound
        acceptance (dict[str, bool]): `within_union_bound`
    """

    n: int
    d: int
    delta: float
    beta: Optional[float] = None
    replicates: int
    rate: float
    std_error: float
    boundary_sites: int
    boundary_sites_approx: float
    v_n: float
    union_bound: float
    union_bound_mills: float
    acceptance: dict[str, bool]


def boundary_report(
    hits: np.ndarray,
    cfg: FieldConfig,
    constants: NormalizingConstants,
    delta: float,
    beta: Optional[float] = None,
    bands: AcceptanceBands = DEFAULT_BANDS,
) -> BoundaryReport:
    """Aggregate per-replicate boundary-layer hit flags into a BoundaryReport."""
    flags = np.asarray(hits, dtype=bool)
    replicates = int(flags.size)
    rate = float(flags.mean())
    se = math.sqrt(rate * (1.0 - rate) / replicates)

    boundary_sites = int((~bulk_region_mask(cfg, beta)).sum())
    v_n = zero_average_green(cfg).v_n
    t = threshold(constants, delta) / math.sqrt(v_n)
    union = boundary_sites * float(scipy.stats.norm.sf(t))
    return BoundaryReport(
        n=cfg.n,
        d=cfg.d,
        delta=delta,
        beta=beta,
        replicates=replicates,
        rate=rate,
        std_error=se,
        boundary_sites=boundary_sites,
        boundary_sites_approx=boundary_layer_approx(cfg, beta),
        v_n=v_n,
        union_bound=union,
        union_bound_mills=boundary_sites * gaussian_tail_bound(t),
        acceptance={"within_union_bound": rate <= union + bands.se_multiple * se},
    )


def require_bulk(cfg: FieldConfig, beta: Optional[float] = None) -> None:
    """
    Raises:
        ValidationError: If the bulk region R_n is empty
    """
    lo, hi = bulk_bounds(cfg.n, beta)
    if lo > hi:
        raise ValidationError(
            f"Bulk region is empty for n={cfg.n}", details={"n": cfg.n, "beta": beta, "bounds": [lo, hi]}
        )


def boundary_exceedance_rate(
    cfg: FieldConfig,
    constants: NormalizingConstants,
    delta: float,
    replicates: int,
    policy: SeedPolicy,
    beta: Optional[float] = None,
    bands: AcceptanceBands = DEFAULT_BANDS,
    workers: Optional[int] = None,
) -> BoundaryReport:
    """
    Fraction of sampled fields exceeding u_N(delta) somewhere outside the bulk.

    Args:
        cfg: Torus geometry with a nonempty bulk region
        constants: Constants built for cfg.N
        delta: Level
        replicates: M >= 100
        policy: Seed derivation
        beta: Bulk exponent (default settings.bulk_beta)
        bands: Acceptance thresholds
        workers: Thread count

    Returns:
        BoundaryReport: The rate (`.rate`) with its union-bound oracle

    Raises:
        ValidationError: If the bulk region is empty or replicates < 100
    """
    check_replicates(replicates)
    require_bulk(cfg, beta)
    layer = ~bulk_region_mask(cfg, beta).reshape(-1)

    hits = sweep_fields(
        cfg, policy, replicates,
        lambda f: bool(np.any(rescale(f.flat[layer], constants) > delta)),
        workers, "boundary",
    )
    report = boundary_report(np.array(hits), cfg, constants, delta, beta, bands)
    logger.info(
        "Boundary n=%d delta=%.2f M=%d: rate=%.4f +/- %.4f (union bound %.4f)",
        cfg.n, delta, replicates, report.rate, report.std_error, report.union_bound,
    )
    return report
