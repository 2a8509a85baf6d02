"""
Killed Green's functions, harmonic measure and expected exit times.

For a finite region V (on Z^d or on the torus) with one-step matrix P_V of the
walk restricted to V, the killed Green's function is g^V = (I - P_V)^{-1}.
Every exit quantity follows from it:

    harmonic measure  H_V(x, z) = sum_{w in V} g^V(x, w) P(w, z),  z outside V
    exit time         E_x[T_V]  = sum_{w in V} g^V(x, w)

Solves are dense and exact; regions larger than `settings.dense_max_sites`
are refused.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
import scipy.linalg

from ...core.exceptions import ResourceLimitError, ValidationError, VerificationError
from ...core.logging_config import get_logger
from ...core.settings import settings
from ..lattice import Region

logger = get_logger(__name__)


class KilledGreenSolve:
    """
    Exact killed-walk solve on a finite region.

    Attributes:
        region (Region): State space V (or U on the torus)
        matrix (np.ndarray): g^V(x, y) for x, y in the region, indexed like region.sites
        boundary (np.ndarray): Exterior boundary sites, shape (k, d)
        exit_kernel (np.ndarray): One-step probabilities region -> boundary, shape (m, k)

    Thread Safety:
        Immutable after construction.
    """

    def __init__(self, region: Region):
        if region.size > settings.dense_max_sites:
            raise ResourceLimitError(
                f"Region of {region.size} sites exceeds the dense solve limit",
                details={"sites": region.size, "limit": settings.dense_max_sites},
            )
        if region.is_full_torus():
            raise ValidationError(
                "Exit time from the full torus is undefined; U must be a proper subset",
                details={"n": region.cfg.n, "d": region.cfg.d},
            )

        self.region = region
        m, two_d = region.size, 2 * region.d

        nb = region.neighbours(region.sites)                    # (m, 2d, d)
        nb_index = region.index_of(nb.reshape(-1, region.d)).reshape(m, two_d)

        transition = np.zeros((m, m))
        rows = np.repeat(np.arange(m), two_d)
        inside = nb_index.reshape(-1) >= 0
        np.add.at(transition, (rows[inside], nb_index.reshape(-1)[inside]), 1.0 / two_d)

        self.boundary = region.exterior_boundary()
        self.exit_kernel = np.zeros((m, self.boundary.shape[0]))
        if self.boundary.shape[0]:
            boundary_region = Region(self.boundary, region.cfg)
            b_index = boundary_region.index_of(nb.reshape(-1, region.d))
            outside = ~inside
            np.add.at(self.exit_kernel, (rows[outside], b_index[outside]), 1.0 / two_d)

        system = np.eye(m) - transition
        try:
            self.matrix = scipy.linalg.solve(system, np.eye(m), assume_a="pos")
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
            raise VerificationError(
                "Killed-walk system is singular",
                details={"sites": m, "error": str(e)},
            )
        logger.debug("Killed solve: %s, boundary=%d", region, self.boundary.shape[0])

    # ------------------------------------------------------------------
    def _index(self, x: Sequence[int]) -> int:
        return int(self.region.index_of(x)[0])

    def value(self, x: Sequence[int], y: Sequence[int]) -> float:
        """g^V(x, y); zero when x or y lies outside the region."""
        i, j = self._index(x), self._index(y)
        if i < 0 or j < 0:
            return 0.0
        return float(self.matrix[i, j])

    def harmonic_measure(self, x: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """
        Law of X_{T_V} under P_x.

        Returns:
            tuple[np.ndarray, np.ndarray]: (sites (k, d), probabilities (k,));
            a point mass at x when x is outside the region
        """
        i = self._index(x)
        if i < 0:
            return np.atleast_2d(np.asarray(x, dtype=np.int64)), np.ones(1)
        return self.boundary, self.matrix[i] @ self.exit_kernel

    def expected_exit_time(self, x: Sequence[int]) -> float:
        """E_x[T_V]: solution of (I - P)h = 1 on V with h = 0 outside."""
        i = self._index(x)
        if i < 0:
            return 0.0
        return float(self.matrix[i].sum())

    def exit_expectation(self, x: Sequence[int], f: Callable[[np.ndarray], np.ndarray]) -> float:
        """
        E_x[f(X_{T_V})] for a vectorised f on (k, d) site arrays.

        Exit from a finite region is almost sure, so no indicator is needed.
        """
        sites, probs = self.harmonic_measure(x)
        return float(np.dot(probs, f(sites)))

    def exit_time_profile(self) -> np.ndarray:
        """E_x[T_V] for every site of the region, indexed like region.sites."""
        return self.matrix.sum(axis=1)


def killed_green(region: Region, x: Sequence[int], y: Sequence[int]) -> float:
    """
    g^V(x, y) by an exact dense solve.

    Args:
        region: Finite nonempty region
        x: Start site
        y: Target site

    Returns:
        float: Expected visits to y before exiting V; 0 if x or y is outside

    Example:
        >>> killed_green(Region.single_site((0, 0, 0)), (0, 0, 0), (0, 0, 0))
        1.0
    """
    return KilledGreenSolve(region).value(x, y)


def harmonic_measure(region: Region, x: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
    """Exact exit distribution of the walk started at x."""
    return KilledGreenSolve(region).harmonic_measure(x)


def expected_exit_time(region: Region, x: Sequence[int]) -> float:
    """Exact E_x[T_V]."""
    return KilledGreenSolve(region).expected_exit_time(x)


def exit_time_bound(n: int, d: int) -> float:
    """(n sqrt(d) + 2)^2, the ball estimate bounding E[T_V] for V = [1, n-2]^d."""
    return (n * np.sqrt(d) + 2.0) ** 2
