"""Replicate sweeps that reduce each sampled field to a small summary."""

from __future__ import annotations

from typing import Callable, List, Optional, TypeVar

from ...core.exceptions import ValidationError
from ..batch import ReplicateRunner
from ..lattice import FieldConfig
from ..sampler import SeedPolicy, TorusField, mode_layout, sample_field

T = TypeVar("T")

MIN_REPLICATES = 100


def check_replicates(replicates: int, minimum: int = MIN_REPLICATES) -> None:
    if replicates < minimum:
        raise ValidationError(
            f"Experiment needs at least {minimum} replicates, got {replicates}",
            details={"replicates": replicates, "minimum": minimum},
        )


def sweep_fields(
    cfg: FieldConfig,
    policy: SeedPolicy,
    replicates: int,
    reducer: Callable[[TorusField], T],
    workers: Optional[int] = None,
    label: str = "sweep",
) -> List[T]:
    """
    reducer(field_i) for replicate fields i = 0..replicates-1, in index order.

    Fields are dropped as soon as they are reduced, so memory stays at one
    field per worker whatever the replicate count.
    """
    mode_layout(cfg)
    runner = ReplicateRunner(workers=workers, label=label)
    return runner.run(replicates, lambda i: reducer(sample_field(cfg, policy.stream_seed(i))))
