"""
Discrete-time simple random walk until exit from a region.

Each step consumes exactly one raw 64-bit draw of the walk's bit generator,
mapped to a direction by r mod 2d (order +e_1, -e_1, +e_2, ...). Block
simulation advances many walks in lockstep; the walks still active at a step
draw in their row order, so a (seed, starts) pair fixes every trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ...core.exceptions import StepBudgetExceeded, ValidationError
from ...core.logging_config import get_logger
from ...core.settings import settings
from ..lattice import Region, unit_directions

logger = get_logger(__name__)


@dataclass(frozen=True)
class ExitSample:
    """
    First exit of one walk.

    Attributes:
        exit_site (tuple[int, ...]): X_{T_V}, outside the region
        exit_time (int): T_V; zero iff the walk started outside
    """

    exit_site: tuple[int, ...]
    exit_time: int


@dataclass(frozen=True)
class ExitBlock:
    """
    Exits of a block of walks.

    Attributes:
        exit_sites (np.ndarray): (m, d) int64
        exit_times (np.ndarray): (m,) int64
    """

    exit_sites: np.ndarray
    exit_times: np.ndarray

    def __len__(self) -> int:
        return int(self.exit_times.shape[0])

    def sample(self, i: int) -> ExitSample:
        return ExitSample(tuple(int(c) for c in self.exit_sites[i]), int(self.exit_times[i]))


def draw_steps(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    """Direction indices in [0, 2d) from `count` raw 64-bit draws."""
    raw = rng.bit_generator.random_raw(count)
    return (raw % np.uint64(2 * d)).astype(np.int64)


def simulate_exits(
    starts: np.ndarray,
    region: Region,
    rng: np.random.Generator,
    step_cap: Optional[int] = None,
) -> ExitBlock:
    """
    Run one walk per start until each leaves the region.

    Args:
        starts: (m, d) start sites
        region: Finite region of Z^d, or a proper subset of the torus
        rng: Generator owning this block's stream
        step_cap: Step budget per walk (default settings.walk_step_cap)

    Returns:
        ExitBlock: Exit sites and exit times, row-aligned with starts

    Raises:
        ValidationError: If starts have the wrong dimension or the region is the full torus
        StepBudgetExceeded: If some walk is still inside after step_cap steps
    """
    cap = settings.walk_step_cap if step_cap is None else int(step_cap)
    if region.is_full_torus():
        raise ValidationError("A walk never exits the full torus", details={"n": region.cfg.n})

    pos = np.atleast_2d(np.array(starts, dtype=np.int64))
    if pos.shape[1] != region.d:
        raise ValidationError(
            f"Start sites have dimension {pos.shape[1]}, expected {region.d}", details={"d": region.d}
        )
    if region.on_torus:
        pos = np.mod(pos, region.cfg.n)

    steps = unit_directions(region.d)
    times = np.zeros(pos.shape[0], dtype=np.int64)
    active = np.flatnonzero(region.contains(pos))

    t = 0
    while active.size:
        if t >= cap:
            raise StepBudgetExceeded(
                f"{active.size} walk(s) still inside after {cap} steps",
                details={"step_cap": cap, "active": int(active.size), "region": repr(region)},
            )
        t += 1
        moved = pos[active] + steps[draw_steps(rng, active.size, region.d)]
        if region.on_torus:
            moved = np.mod(moved, region.cfg.n)
        pos[active] = moved
        left = ~region.contains(moved)
        times[active[left]] = t
        active = active[~left]

    return ExitBlock(exit_sites=pos, exit_times=times)


def simulate_exit(
    start: Sequence[int],
    region: Region,
    rng: np.random.Generator,
    step_cap: Optional[int] = None,
) -> ExitSample:
    """
    Run a single walk from start until it leaves the region.

    Args:
        start: Start site
        region: Finite region of Z^d, or a proper subset of the torus
        rng: Generator owning the walk's stream
        step_cap: Step budget (default settings.walk_step_cap)

    Returns:
        ExitSample: First site outside the region and the step count

    Example:
        >>> s = simulate_exit((0, 0, 0), Region.single_site((0, 0, 0)), make_generator(1))
        >>> s.exit_time
        1
    """
    return simulate_exits(np.asarray([start]), region, rng, step_cap).sample(0)
