"""Empirical second moments of sampled fields."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from ...core.exceptions import ValidationError
from .spectral import TorusField


def stack_fields(fields: Iterable[TorusField]) -> np.ndarray:
    """(M, N) matrix of flattened field values."""
    rows = [f.flat for f in fields]
    if not rows:
        raise ValidationError("No fields to stack", details={})
    return np.vstack(rows)


def empirical_covariance(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Covariance of mean-zero samples with entrywise standard errors.

    The mean is known to be zero, so Cov(x, y) is estimated by the average of
    Psi(x) Psi(y) and its standard error by the sample spread of that product.

    Args:
        samples: (M, N) array, one flattened field per row, M >= 2

    Returns:
        tuple[np.ndarray, np.ndarray]: (N, N) covariance and (N, N) standard errors
    """
    X = np.asarray(samples, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValidationError("empirical_covariance needs an (M, N) array with M >= 2", details={"shape": list(X.shape)})
    M = X.shape[0]
    cov = X.T @ X / M
    second = (X ** 2).T @ (X ** 2) / M
    se = np.sqrt(np.clip(second - cov ** 2, 0.0, None) / (M - 1))
    return cov, se
