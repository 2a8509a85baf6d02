"""
Exact spectral sampler of the zero-average field.

With sigma_k = lambda_k^{-1/2} for k != 0 and sigma_0 = 0, draw a Hermitian
array of standard complex Gaussians Z_k (Z_{-k} = conj(Z_k)) and set

    Psi(x) = sqrt(N) * ifftn(sigma Z)(x) = N^{-1/2} sum_k sigma_k Z_k e^{2 pi i k.x/n}.

Frequencies split into k = 0, self-conjugate modes (2k = 0 mod n, Z_k real
N(0, 1)) and conjugate pairs, where the representative k (row-major index of
k below that of -k) gets Z_k = (A + iB)/sqrt(2) with A, B independent N(0, 1).
The covariance of Psi is then exactly G_T and the k = 0 mode being zero makes
every field sum to zero.

Module Input:
    - FieldConfig, a 64-bit seed, optionally a prebuilt GreenTable

Module Output:
    - TorusField realisations, batches over a SeedPolicy
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, List, Optional

import numpy as np
import scipy.fft

from ...core.exceptions import ValidationError
from ...core.logging_config import get_logger
from ..batch import ReplicateRunner
from ..greens import GreenTable, eigenvalue_table
from ..lattice import FieldConfig
from .seeds import SeedPolicy, make_generator

logger = get_logger(__name__)


@dataclass(frozen=True)
class TorusField:
    """
    One realisation of the zero-average field.

    Attributes:
        cfg (FieldConfig): Torus geometry
        values (np.ndarray): Psi(x), float64 of shape cfg.shape (row-major site order)
        seed (int): Stream seed the field was drawn from
    """

    cfg: FieldConfig
    values: np.ndarray = field(repr=False)
    seed: int

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def sum_residual(self) -> float:
        """|sum_x Psi(x)| relative to N max|Psi|, which the zero-average contract bounds by 1e-9."""
        scale = self.cfg.N * float(np.max(np.abs(self.values)))
        return float(abs(self.values.sum())) / scale if scale > 0 else 0.0


@dataclass(frozen=True)
class ModeLayout:
    """Partition of the frequency grid used by the sampler."""

    sigma: np.ndarray          # sigma_k, shape cfg.shape, sigma_0 = 0
    representatives: np.ndarray  # flat indices of paired representatives
    partners: np.ndarray         # flat indices of their conjugates
    self_conjugate: np.ndarray   # flat indices with 2k = 0 mod n, k != 0


def _mode_layout_from(cfg: FieldConfig, eigenvalues: np.ndarray) -> ModeLayout:
    flat_idx = np.arange(cfg.N).reshape(cfg.shape)
    grids = np.indices(cfg.shape)
    conj = np.ravel_multi_index(tuple(np.mod(-grids, cfg.n)), cfg.shape).reshape(-1)
    flat = flat_idx.reshape(-1)

    representatives = flat[flat < conj]
    self_conjugate = flat[(flat == conj) & (flat != 0)]

    sigma = np.zeros(cfg.N)
    lam = eigenvalues.reshape(-1)
    sigma[1:] = 1.0 / np.sqrt(lam[1:])
    return ModeLayout(
        sigma=sigma.reshape(cfg.shape),
        representatives=representatives,
        partners=conj[representatives],
        self_conjugate=self_conjugate,
    )


@lru_cache(maxsize=16)
def mode_layout(cfg: FieldConfig) -> ModeLayout:
    """Cached mode partition and sigma_k for cfg."""
    return _mode_layout_from(cfg, eigenvalue_table(cfg))


def _layout_for(cfg: FieldConfig, table: Optional[GreenTable]) -> ModeLayout:
    if table is not None and table.cfg != cfg:
        raise ValidationError("Green table was built for another torus", details={"cfg": repr(cfg)})
    return mode_layout(cfg)


def sample_field(cfg: FieldConfig, seed: int, table: Optional[GreenTable] = None) -> TorusField:
    """
    Draw one zero-average field.

    Draw order is fixed: A for every representative, then B, then the
    self-conjugate modes, each in row-major frequency order.

    Args:
        cfg: Torus geometry
        seed: 64-bit stream seed
        table: Optional Green table of cfg; only its geometry is checked

    Returns:
        TorusField: Field with covariance G_T and zero sum

    Raises:
        ValidationError: If the table belongs to another cfg or the seed is invalid
    """
    layout = _layout_for(cfg, table)
    rng = make_generator(seed)
    n_pairs = layout.representatives.size
    draws = rng.standard_normal(2 * n_pairs + layout.self_conjugate.size)

    modes = np.zeros(cfg.N, dtype=np.complex128)
    paired = (draws[:n_pairs] + 1j * draws[n_pairs:2 * n_pairs]) / np.sqrt(2.0)
    modes[layout.representatives] = paired
    modes[layout.partners] = np.conj(paired)
    modes[layout.self_conjugate] = draws[2 * n_pairs:]

    spectrum = layout.sigma * modes.reshape(cfg.shape)
    values = np.sqrt(cfg.N) * scipy.fft.ifftn(spectrum).real
    values.setflags(write=False)
    return TorusField(cfg=cfg, values=values, seed=int(seed))


def iter_batch(
    cfg: FieldConfig,
    policy: SeedPolicy,
    count: int,
    workers: Optional[int] = None,
) -> Iterator[TorusField]:
    """
    Stream fields for replicate indices 0..count-1 in index order.

    Replicate i is sample_field(cfg, policy.stream_seed(i)), whatever the
    worker count.
    """
    mode_layout(cfg)
    runner = ReplicateRunner(workers=workers, label="sample_batch")
    return runner.imap(count, lambda i: sample_field(cfg, policy.stream_seed(i)))


def sample_batch(
    cfg: FieldConfig,
    policy: SeedPolicy,
    count: int,
    workers: Optional[int] = None,
) -> List[TorusField]:
    """
    Fields for replicate indices 0..count-1.

    Args:
        cfg: Torus geometry
        policy: Seed derivation
        count: Number of fields, >= 1
        workers: Thread count (capped by ZAGFF_THREADS)

    Returns:
        List[TorusField]: Index-ordered fields
    """
    return list(iter_batch(cfg, policy, count, workers))
