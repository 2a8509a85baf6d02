"""
All extremes experiments on one replicate sweep.

Every sampled field is reduced once to its maximum, exceedance cell counts,
Laplace summand and boundary-layer flag, so the Gumbel, Poisson, Laplace and
boundary reports share the same replicates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel

from ...core.exceptions import ValidationError
from ...core.logging_config import get_logger
from ...core.settings import settings
from ..extremes import NormalizingConstants, extract_point_pattern, rescale, threshold
from ..greens import zero_average_green
from ..lattice import FieldConfig, bulk_bounds, bulk_region_mask
from ..sampler import SeedPolicy, TorusField
from .bands import DEFAULT_BANDS, AcceptanceBands
from .boundary import BoundaryReport, boundary_report
from .gumbel import GumbelReport, gumbel_report
from .laplace import IndicatorFunction, LaplaceReport, laplace_report
from .poisson import PoissonReport, cell_labels, finite_n_mean_count, poisson_report
from .sweep import check_replicates, sweep_fields

logger = get_logger(__name__)


@dataclass(frozen=True)
class ReplicateSummary:
    seed: int
    max_raw: float
    max_rescaled: float
    cells: np.ndarray
    laplace_eta: float
    boundary_hit: bool


class ExtremesSuite(BaseModel):
    """
    Reports of one shared sweep.

    Attributes:
        n, d, replicates, master_seed: Run parameters
        constants (NormalizingConstants): Constants used
        gumbel, poisson, laplace: Reports
        boundary (Optional[BoundaryReport]): None when the bulk region is empty
        acceptance (dict[str, bool]): Union of the report flags
    """

    n: int
    d: int
    replicates: int
    master_seed: int
    constants: NormalizingConstants
    gumbel: GumbelReport
    poisson: PoissonReport
    laplace: LaplaceReport
    boundary: Optional[BoundaryReport] = None
    acceptance: dict[str, bool]


@dataclass(frozen=True)
class SuiteResult:
    """Suite reports plus the per-replicate table."""

    report: ExtremesSuite
    replicate_frame: pd.DataFrame


def run_extremes_suite(
    cfg: FieldConfig,
    constants: NormalizingConstants,
    replicates: int,
    policy: SeedPolicy,
    delta: float = 0.0,
    split: Optional[Sequence[int]] = None,
    test_function: Optional[IndicatorFunction] = None,
    beta: Optional[float] = None,
    floor: Optional[float] = None,
    bands: AcceptanceBands = DEFAULT_BANDS,
    workers: Optional[int] = None,
) -> SuiteResult:
    """
    Run the Gumbel, Poisson, Laplace and boundary experiments together.

    Args:
        cfg: Torus geometry
        constants: Constants built for cfg.N
        replicates: M >= 100
        policy: Seed derivation; replicate i uses policy.stream_seed(i)
        delta: Level of the exceedance counts and the boundary rate
        split: Cells per axis of the count split (default halves along axis 1)
        test_function: Laplace test function (default 1 * 1{z > delta})
        beta: Bulk exponent (default settings.bulk_beta)
        floor: Pattern floor; the Laplace support must not reach below it
        bands: Acceptance thresholds
        workers: Thread count

    Returns:
        SuiteResult: Reports and a per-replicate frame with columns
        replicate, seed, max_raw, max_rescaled, count, laplace_eta, boundary_hit
    """
    check_replicates(replicates)
    split = list(split) if split is not None else [2] + [1] * (cfg.d - 1)
    f = test_function or IndicatorFunction(c=1.0, delta=delta)
    labels = cell_labels(cfg, split)
    n_cells = int(np.prod(split))
    lo, hi = bulk_bounds(cfg.n, beta)
    has_bulk = lo <= hi
    layer = ~bulk_region_mask(cfg, beta).reshape(-1)
    cutoff = settings.pattern_floor if floor is None else float(floor)
    if min(delta, f.delta) < cutoff:
        raise ValidationError(
            "Count level and test-function support must lie above the pattern floor",
            details={"delta": delta, "support": f.delta, "floor": cutoff},
        )

    def reduce(field: TorusField) -> ReplicateSummary:
        heights = rescale(field.flat, constants)
        i = int(np.argmax(field.flat))
        pattern = extract_point_pattern(field, constants, floor=f.delta)
        return ReplicateSummary(
            seed=field.seed,
            max_raw=float(field.flat[i]),
            max_rescaled=float(heights[i]),
            cells=np.bincount(labels[heights > delta], minlength=n_cells),
            laplace_eta=f.evaluate(pattern),
            boundary_hit=bool(np.any(heights[layer] > delta)) if has_bulk else False,
        )

    rows = sweep_fields(cfg, policy, replicates, reduce, workers, "extremes_suite")

    maxima = np.array([r.max_rescaled for r in rows])
    cells = np.vstack([r.cells for r in rows])
    eta = np.array([r.laplace_eta for r in rows])
    hits = np.array([r.boundary_hit for r in rows])

    v_n = zero_average_green(cfg).v_n
    u = threshold(constants, delta)
    gumbel = gumbel_report(maxima, cfg, constants, bands)
    poisson = poisson_report(
        cells.sum(axis=1), cells, delta, split,
        finite_n_mean_count(cfg.N, u, v_n), finite_n_mean_count(cfg.N, u, constants.v), cfg, bands,
    )
    laplace = laplace_report(eta, f, bands)

    boundary = boundary_report(hits, cfg, constants, delta, beta, bands) if has_bulk else None

    acceptance = {}
    for name, rep in (("gumbel", gumbel), ("poisson", poisson), ("laplace", laplace), ("boundary", boundary)):
        if rep is not None:
            acceptance.update({f"{name}.{k}": v for k, v in rep.acceptance.items()})

    report = ExtremesSuite(
        n=cfg.n, d=cfg.d, replicates=replicates, master_seed=policy.master_seed,
        constants=constants, gumbel=gumbel, poisson=poisson, laplace=laplace,
        boundary=boundary, acceptance=acceptance,
    )
    frame = pd.DataFrame(
        {
            "replicate": np.arange(replicates),
            "seed": np.array([r.seed for r in rows], dtype=np.uint64),
            "max_raw": np.array([r.max_raw for r in rows]),
            "max_rescaled": maxima,
            "count": cells.sum(axis=1),
            "laplace_eta": eta,
            "boundary_hit": hits.astype(np.int64),
        }
    )
    logger.info(
        "Extremes suite n=%d M=%d: D=%.4f mean=%.4f dispersion=%.4f laplace=%.4f",
        cfg.n, replicates, gumbel.ks_distance, poisson.mean, poisson.dispersion, laplace.empirical,
    )
    return SuiteResult(report=report, replicate_frame=frame)
