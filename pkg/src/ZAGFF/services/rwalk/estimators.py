"""
Monte Carlo estimators built on the block walker.

Replicates are simulated in blocks of `settings.walk_block_size` walks; block
b draws from the stream `policy.stream_seed(b)`, and blocks are merged in
block order, so estimates depend only on (seed, replicates) and never on the
worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from ...core.exceptions import UnsupportedDimensionError, ValidationError
from ...core.logging_config import get_logger
from ...core.settings import settings
from ..batch import ReplicateRunner, block_sizes
from ..lattice import Region, unit_directions
from ..sampler.seeds import SeedPolicy
from .walker import draw_steps, simulate_exits

logger = get_logger(__name__)

MIN_REPLICATES = 100


class McEstimate(BaseModel):
    """
    Sample mean with its normal-approximation standard error.

    Attributes:
        mean (float): Sample mean
        std_error (float): Sample standard deviation / sqrt(replicates)
        replicates (int): Number of samples
    """

    mean: float
    std_error: float = Field(ge=0.0)
    replicates: int = Field(ge=1)

    def within(self, target: float, k: float = 3.0) -> bool:
        """|mean - target| <= k standard errors."""
        return abs(self.mean - target) <= k * self.std_error

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "McEstimate":
        x = np.asarray(samples, dtype=np.float64)
        se = float(x.std(ddof=1) / math.sqrt(x.size)) if x.size > 1 else 0.0
        return cls(mean=float(x.mean()), std_error=se, replicates=int(x.size))


@dataclass(frozen=True)
class ExitDistribution:
    """
    Empirical law of the exit site.

    Attributes:
        sites (np.ndarray): (k, d) candidate exit sites in lexicographic order
        counts (np.ndarray): Exits observed at each site; sums to replicates
        replicates (int): Number of walks
    """

    sites: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    replicates: int

    @property
    def frequencies(self) -> np.ndarray:
        return self.counts / self.replicates

    @property
    def std_errors(self) -> np.ndarray:
        p = self.frequencies
        return np.sqrt(p * (1.0 - p) / self.replicates)


def _check_replicates(replicates: int) -> None:
    if replicates < MIN_REPLICATES:
        raise ValidationError(
            f"Monte Carlo estimators need at least {MIN_REPLICATES} replicates, got {replicates}",
            details={"replicates": replicates},
        )


def _exit_sweep(
    start: Sequence[int],
    region: Region,
    replicates: int,
    policy: SeedPolicy,
    workers: Optional[int],
    step_cap: Optional[int],
):
    start_arr = np.asarray(start, dtype=np.int64)
    sizes = block_sizes(replicates, settings.walk_block_size)

    def run_block(b: int):
        starts = np.broadcast_to(start_arr, (sizes[b], start_arr.size))
        return simulate_exits(starts, region, policy.generator(b), step_cap)

    runner = ReplicateRunner(workers=workers, chunk_size=max(1, settings.worker_count(workers)), label="exit_sweep")
    blocks = runner.run(len(sizes), run_block)
    sites = np.concatenate([blk.exit_sites for blk in blocks])
    times = np.concatenate([blk.exit_times for blk in blocks])
    return sites, times


def expected_exit_time_mc(
    start: Sequence[int],
    region: Region,
    replicates: int,
    policy: SeedPolicy,
    workers: Optional[int] = None,
    step_cap: Optional[int] = None,
) -> McEstimate:
    """
    Monte Carlo estimate of E_start[T_V].

    Args:
        start: Start site
        region: Finite region of Z^d or proper torus subset
        replicates: Number of walks, >= 100
        policy: Seed derivation; block b uses policy.stream_seed(b)
        workers: Thread count (capped by ZAGFF_THREADS)
        step_cap: Per-walk step budget

    Returns:
        McEstimate: Mean exit time and its standard error

    Raises:
        ValidationError: If replicates < 100
        StepBudgetExceeded: Propagated from the walker
    """
    _check_replicates(replicates)
    _, times = _exit_sweep(start, region, replicates, policy, workers, step_cap)
    estimate = McEstimate.from_samples(times)
    logger.info(
        "E[T] from %s over %s: %.4f +/- %.4f (%d walks)",
        tuple(start), region, estimate.mean, estimate.std_error, replicates,
    )
    return estimate


def exit_distribution_mc(
    start: Sequence[int],
    region: Region,
    replicates: int,
    policy: SeedPolicy,
    workers: Optional[int] = None,
    step_cap: Optional[int] = None,
) -> ExitDistribution:
    """
    Empirical harmonic measure of the region seen from start.

    Candidate sites are the exterior boundary of the region (or the start
    itself when it lies outside, where T_V = 0).

    Raises:
        ValidationError: If replicates < 100
        StepBudgetExceeded: Propagated from the walker
    """
    _check_replicates(replicates)
    exit_sites, _ = _exit_sweep(start, region, replicates, policy, workers, step_cap)

    if start in region:
        candidates = region.exterior_boundary()
    else:
        candidates = np.atleast_2d(exit_sites[0])
    lookup = Region(candidates, region.cfg)
    index = lookup.index_of(exit_sites)
    counts = np.bincount(index, minlength=lookup.size)
    return ExitDistribution(sites=lookup.sites, counts=counts, replicates=replicates)


def _visit_tail(d: int, half_steps: int) -> float:
    # sum_{k > K} P^{2k}(0,0) with P^{2k}(0,0) ~ 2 (d / (4 pi k))^{d/2}, integrated from K + 1/2
    a = d / 2.0
    return 2.0 * (d / (4.0 * math.pi)) ** a * (half_steps + 0.5) ** (1.0 - a) / (a - 1.0)


def green_zd_visits_mc(
    d: int,
    replicates: int,
    policy: SeedPolicy,
    horizon: int = 2000,
    workers: Optional[int] = None,
) -> McEstimate:
    """
    g_{Z^d}(0, 0) as the mean number of visits to 0 within `horizon` steps.

    Visits after the horizon are added through the local-CLT tail of the
    return probabilities. The standard error covers only the sampled part.

    Args:
        d: Dimension, d >= 3
        replicates: Number of walks, >= 100
        policy: Seed derivation; block b uses policy.stream_seed(b)
        horizon: Simulated steps per walk (even, >= 2)
        workers: Thread count

    Returns:
        McEstimate: Visit-count estimate of g(0, 0)
    """
    if d < 3:
        raise UnsupportedDimensionError(f"Visit counts diverge for d={d}", details={"d": d})
    _check_replicates(replicates)
    if horizon < 2 or horizon % 2:
        raise ValidationError("horizon must be an even integer >= 2", details={"horizon": horizon})

    steps = unit_directions(d)
    sizes = block_sizes(replicates, settings.walk_block_size)

    def run_block(b: int) -> np.ndarray:
        rng = policy.generator(b)
        pos = np.zeros((sizes[b], d), dtype=np.int64)
        visits = np.ones(sizes[b], dtype=np.int64)
        for _ in range(horizon):
            pos += steps[draw_steps(rng, sizes[b], d)]
            visits += ~pos.any(axis=1)
        return visits

    runner = ReplicateRunner(workers=workers, chunk_size=max(1, settings.worker_count(workers)), label="visit_count")
    visits = np.concatenate(runner.run(len(sizes), run_block))
    sampled = McEstimate.from_samples(visits)
    tail = _visit_tail(d, horizon // 2)
    logger.info("Visit-count g(0,0): %.5f + tail %.5f (%d walks)", sampled.mean, tail, replicates)
    return McEstimate(mean=sampled.mean + tail, std_error=sampled.std_error, replicates=replicates)
