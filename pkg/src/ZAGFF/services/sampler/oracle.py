"""
Dense reference sampler for small tori.

Factorises the exact covariance G_T = F F^T by a symmetric eigendecomposition
(negative round-off eigenvalues clipped to zero) and draws Psi = F xi with
xi standard normal. Used to validate the spectral sampler by moment matching.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional

import numpy as np
import scipy.linalg

from ...core.exceptions import ResourceLimitError
from ...core.logging_config import get_logger
from ...core.settings import settings
from ..greens import GreenTable, zero_average_green
from ..lattice import FieldConfig
from .seeds import make_generator
from .spectral import TorusField

logger = get_logger(__name__)


def _check_size(cfg: FieldConfig) -> None:
    if cfg.N > settings.oracle_max_sites:
        raise ResourceLimitError(
            f"Dense sampler oracle limited to {settings.oracle_max_sites} sites, got N={cfg.N}",
            details={"N": cfg.N, "limit": settings.oracle_max_sites},
        )


def covariance_factor(cfg: FieldConfig, table: Optional[GreenTable] = None) -> np.ndarray:
    """
    F with F F^T = G_T in row-major site order.

    Raises:
        ResourceLimitError: If N > settings.oracle_max_sites
    """
    _check_size(cfg)
    if table is None:
        return _cached_factor(cfg)
    return _factor(table)


def _factor(table: GreenTable) -> np.ndarray:
    w, V = scipy.linalg.eigh(table.dense())
    factor = V * np.sqrt(np.clip(w, 0.0, None))[None, :]
    # G 1 = 0, so projecting onto the mean-zero subspace leaves F F^T unchanged
    return factor - factor.mean(axis=0, keepdims=True)


@lru_cache(maxsize=8)
def _cached_factor(cfg: FieldConfig) -> np.ndarray:
    factor = _factor(zero_average_green(cfg))
    factor.setflags(write=False)
    logger.debug("Dense covariance factor built for %s", cfg)
    return factor


def dense_sample_oracle(cfg: FieldConfig, seed: int) -> TorusField:
    """
    Draw one field through the dense covariance factor.

    Args:
        cfg: Torus geometry with N <= settings.oracle_max_sites
        seed: 64-bit stream seed

    Returns:
        TorusField: Field with covariance G_T

    Raises:
        ResourceLimitError: If N is above the oracle limit
    """
    factor = covariance_factor(cfg)
    xi = make_generator(seed).standard_normal(cfg.N)
    values = (factor @ xi).reshape(cfg.shape)
    values.setflags(write=False)
    return TorusField(cfg=cfg, values=values, seed=int(seed))
