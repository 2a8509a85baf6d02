"""
Torus and Z^d geometry.

This module provides the FieldConfig value object and the pure geometric
operations on T_n^d = (Z/nZ)^d and Z^d: canonical projection, canonical
representatives, torus addition and graph distance, row-major site indexing
and the bulk region R_n = (n^beta, n - n^beta]^d.

Module Input:
    - Dimension d >= 3 and side length n >= 2
    - Points as integer sequences (single points) or (m, d) integer arrays

Module Output:
    - Immutable FieldConfig objects
    - Projected/representative points, distances, bulk-region masks
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ...core.exceptions import ResourceLimitError, UnsupportedDimensionError, ValidationError
from ...core.settings import settings

TorusPoint = tuple[int, ...]
LatticePoint = tuple[int, ...]


class FieldConfig(BaseModel):
    """
    Torus geometry shared by every experiment.

    Attributes:
        d (int): Dimension, d >= 3
        n (int): Side length, n >= 2

    Derived:
        N (int): Number of sites n^d, bounded by `settings.max_field_sites`
        shape (tuple[int, ...]): Array shape (n,) * d of site-indexed arrays
    """

    model_config = ConfigDict(frozen=True)

    d: int
    n: int

    @model_validator(mode="after")
    def _check(self) -> "FieldConfig":
        if self.d < 3:
            raise UnsupportedDimensionError(
                f"Dimension d={self.d} unsupported; the toolkit requires d >= 3",
                details={"d": self.d},
            )
        if self.n < 2:
            raise ValidationError(
                f"Side length n={self.n} must be >= 2", details={"n": self.n}
            )
        size = self.n ** self.d
        if size > settings.max_field_sites:
            raise ResourceLimitError(
                f"N = {self.n}^{self.d} = {size} exceeds the addressable field size",
                details={"N": size, "limit": settings.max_field_sites},
            )
        return self

    @property
    def N(self) -> int:
        return self.n ** self.d

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.d


def _as_point(x: Sequence[int], d: int, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=np.int64)
    if arr.ndim != 1 or arr.shape[0] != d:
        raise ValidationError(
            f"Point {name} has dimension {arr.shape[-1] if arr.ndim else 0}, expected {d}",
            details={"point": [int(c) for c in np.atleast_1d(arr)], "d": d},
        )
    return arr


def unit_directions(d: int) -> np.ndarray:
    """
    The 2d unit steps of the simple random walk.

    Order is (+e_1, -e_1, +e_2, -e_2, ...); a walk draw r in [0, 2d) selects row r.

    Returns:
        np.ndarray: Integer array of shape (2d, d)
    """
    steps = np.zeros((2 * d, d), dtype=np.int64)
    for j in range(d):
        steps[2 * j, j] = 1
        steps[2 * j + 1, j] = -1
    return steps


def project(x: Sequence[int], cfg: FieldConfig) -> TorusPoint:
    """
    Canonical projection Z^d -> T_n^d.

    Args:
        x: Lattice point with cfg.d coordinates
        cfg: Torus geometry

    Returns:
        TorusPoint: Coordinates reduced mod n into [0, n-1]

    Raises:
        ValidationError: If the dimension of x differs from cfg.d

    Example:
        >>> project((7, -2, 4), FieldConfig(d=3, n=5))
        (2, 3, 4)
    """
    arr = _as_point(x, cfg.d)
    return tuple(int(c) for c in np.mod(arr, cfg.n))


def representative(x: Sequence[int], cfg: FieldConfig) -> LatticePoint:
    """
    The unique lattice point in [0, n-1]^d projecting onto x.

    Args:
        x: Torus point
        cfg: Torus geometry

    Returns:
        LatticePoint: x-hat with project(x-hat) == x

    Raises:
        ValidationError: If x is not a valid torus point
    """
    arr = _as_point(x, cfg.d)
    if np.any(arr < 0) or np.any(arr >= cfg.n):
        raise ValidationError(
            f"Torus point {tuple(int(c) for c in arr)} has coordinates outside [0, {cfg.n - 1}]",
            details={"point": [int(c) for c in arr], "n": cfg.n},
        )
    return tuple(int(c) for c in arr)


def torus_add(x: Sequence[int], y: Sequence[int], cfg: FieldConfig) -> TorusPoint:
    """Group operation of T_n^d."""
    return project(_as_point(x, cfg.d) + _as_point(y, cfg.d, "y"), cfg)


def torus_distance(x: Sequence[int], y: Sequence[int], cfg: FieldConfig) -> int:
    """
    Graph distance on T_n^d: sum_j min(|x_j - y_j|, n - |x_j - y_j|).

    Args:
        x: Torus point
        y: Torus point
        cfg: Torus geometry

    Returns:
        int: Distance in [0, d * floor(n/2)]

    Raises:
        ValidationError: On dimension mismatch
    """
    diff = np.abs(np.mod(_as_point(x, cfg.d), cfg.n) - np.mod(_as_point(y, cfg.d, "y"), cfg.n))
    return int(np.minimum(diff, cfg.n - diff).sum())


def all_sites(cfg: FieldConfig) -> np.ndarray:
    """
    Every torus site in row-major lexicographic order.

    Returns:
        np.ndarray: Integer array of shape (N, d); row i is the site with flat index i
    """
    grids = np.indices(cfg.shape, dtype=np.int64)
    return grids.reshape(cfg.d, -1).T.copy()


def site_index(x: Sequence[int] | np.ndarray, cfg: FieldConfig) -> int | np.ndarray:
    """Row-major flat index of one torus point or of an (m, d) array of them."""
    arr = np.mod(np.asarray(x, dtype=np.int64), cfg.n)
    if arr.ndim == 1:
        _as_point(arr, cfg.d)
        return int(np.ravel_multi_index(tuple(arr), cfg.shape))
    return np.ravel_multi_index(tuple(arr.T), cfg.shape)


def site_from_index(index: int, cfg: FieldConfig) -> TorusPoint:
    """Inverse of `site_index` for a single flat index."""
    if not 0 <= index < cfg.N:
        raise ValidationError(
            f"Site index {index} outside [0, {cfg.N})", details={"index": index, "N": cfg.N}
        )
    return tuple(int(c) for c in np.unravel_index(index, cfg.shape))


def torus_distances_from_origin(cfg: FieldConfig) -> np.ndarray:
    """
    Graph distance from 0 of every site.

    Returns:
        np.ndarray: Integer array of shape cfg.shape
    """
    k = np.arange(cfg.n)
    per_axis = np.minimum(k, cfg.n - k)
    dist = np.zeros(cfg.shape, dtype=np.int64)
    for axis in range(cfg.d):
        view = [1] * cfg.d
        view[axis] = cfg.n
        dist = dist + per_axis.reshape(view)
    return dist


# ---------------------------------------------------------------------------
# Bulk region R_n = (n^beta, n - n^beta]^d
# ---------------------------------------------------------------------------

def _beta_fraction(beta: float) -> Fraction:
    frac = Fraction(beta).limit_denominator(1000)
    if not Fraction(1, 2) < frac < 1:
        raise ValidationError(
            f"beta={beta} outside (1/2, 1)", details={"beta": beta}
        )
    return frac


def bulk_bounds(n: int, beta: float | None = None) -> tuple[int, int]:
    """
    Inclusive integer range of bulk coordinates.

    A coordinate c is in the bulk iff n^beta < c <= n - n^beta. With
    beta = p/q the comparisons are done exactly as c^q > n^p and
    (n - c)^q >= n^p, so boundary sites are classified deterministically.

    Args:
        n: Side length
        beta: Exponent in (1/2, 1) (default: settings.bulk_beta)

    Returns:
        tuple[int, int]: (lo, hi); the range is empty when lo > hi

    Example:
        >>> bulk_bounds(81)
        (28, 54)
    """
    frac = _beta_fraction(settings.bulk_beta if beta is None else beta)
    p, q = frac.numerator, frac.denominator
    target = n ** p

    # Float guess, then exact integer correction
    guess = int(np.floor(n ** float(frac)))
    lo = max(guess - 2, 0)
    while lo ** q <= target:
        lo += 1
    while lo > 0 and (lo - 1) ** q > target:
        lo -= 1

    hi = min(n - guess + 2, n)
    while hi >= 0 and (n - hi) ** q < target:
        hi -= 1
    while hi + 1 <= n and (n - hi - 1) ** q >= target:
        hi += 1
    return lo, hi


def bulk_region_contains(x: Sequence[int], cfg: FieldConfig, beta: float | None = None) -> bool:
    """
    Membership in R_n for a point of [0, n-1]^d.

    Args:
        x: Lattice point with coordinates in [0, n-1]
        cfg: Torus geometry
        beta: Exponent (default 3/4)

    Returns:
        bool: True iff every coordinate satisfies n^beta < c <= n - n^beta
    """
    arr = _as_point(x, cfg.d)
    lo, hi = bulk_bounds(cfg.n, beta)
    return bool(np.all((arr >= lo) & (arr <= hi)))


def bulk_region_mask(cfg: FieldConfig, beta: float | None = None) -> np.ndarray:
    """
    Boolean mask of R_n over the torus sites.

    Returns:
        np.ndarray: Boolean array of shape cfg.shape
    """
    lo, hi = bulk_bounds(cfg.n, beta)
    coords = np.arange(cfg.n)
    axis_ok = (coords >= lo) & (coords <= hi)
    mask = np.ones(cfg.shape, dtype=bool)
    for axis in range(cfg.d):
        view = [1] * cfg.d
        view[axis] = cfg.n
        mask = mask & axis_ok.reshape(view)
    return mask


def bulk_region_size(cfg: FieldConfig, beta: float | None = None) -> int:
    """|R_n| = (hi - lo + 1)^d, or 0 for an empty bulk."""
    lo, hi = bulk_bounds(cfg.n, beta)
    return max(0, hi - lo + 1) ** cfg.d


def boundary_layer_size(cfg: FieldConfig, beta: float | None = None) -> int:
    """Exact |V_n \\ R_n|."""
    return cfg.N - bulk_region_size(cfg, beta)


def boundary_layer_approx(cfg: FieldConfig, beta: float | None = None) -> float:
    """Closed-form n^d - (n - 2 n^beta)^d used in the union-bound estimate."""
    b = settings.bulk_beta if beta is None else beta
    inner = max(0.0, cfg.n - 2.0 * cfg.n ** b)
    return float(cfg.N - inner ** cfg.d)
