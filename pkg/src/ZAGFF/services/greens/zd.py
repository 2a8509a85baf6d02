"""
Green's function of the simple random walk on Z^d.

g(0, x) = (2 pi)^-d  int_{[-pi, pi]^d} cos(theta . x) / (1 - (1/d) sum_j cos theta_j) dtheta

is evaluated by deterministic quadrature. The integral over the axis carrying
the largest |x_j| is done in closed form,

    int_{-pi}^{pi} cos(m t) / (a - cos t) dt = 2 pi (a - sqrt(a^2 - 1))^|m| / sqrt(a^2 - 1),

which leaves a (d-1)-dimensional integrand with an integrable 1/|theta|
singularity at the origin. That integrand is folded onto [0, pi]^(d-1) and
integrated over dyadic shells [0, pi 2^-k]^(d-1) minus [0, pi 2^-(k+1)]^(d-1),
each shell split into 2^(d-1) - 1 sub-boxes with tensor Gauss-Legendre nodes.
Shell contributions shrink geometrically by 2^-(d-2); refinement stops once a
shell contributes less than the tolerance and the remaining shells are added
as a geometric tail.

Module Input:
    - Lattice displacement x and dimension d >= 3

Module Output:
    - g(0, x) with an error estimate
    - Return-probability series oracle for d = 3
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from ...core.exceptions import QuadratureError, UnsupportedDimensionError, ValidationError
from ...core.logging_config import get_logger
from ...core.settings import settings

logger = get_logger(__name__)

# Absolute accuracy contract of green_zd
GREEN_ZD_ACCURACY = 1e-6


@dataclass(frozen=True)
class QuadratureResult:
    """Value of g(0, x) with the achieved error estimate and refinement depth."""

    value: float
    error_estimate: float
    levels: int


def _check_dimension(d: int) -> None:
    if d < 3:
        raise UnsupportedDimensionError(
            f"g_Z^d diverges for d={d}; requires d >= 3", details={"d": d}
        )


def canonical_displacement(x: Sequence[int]) -> tuple[int, ...]:
    """
    Representative of x under sign flips and coordinate permutations.

    g(0, x) depends only on the multiset of |x_j|; the canonical form sorts
    the absolute values in decreasing order.
    """
    return tuple(sorted((abs(int(c)) for c in x), reverse=True))


def _integrand(theta: np.ndarray, m_axis: int, rest: np.ndarray, d: int) -> np.ndarray:
    # theta: (P, d-1) nodes in [0, pi]^(d-1)
    # a - 1 = sum_j (1 - cos theta_j), written without cancellation
    a_minus_1 = (2.0 * np.sin(0.5 * theta) ** 2).sum(axis=1)
    a = 1.0 + a_minus_1
    s = np.sqrt(a_minus_1 * (a + 1.0))
    val = 2.0 * np.pi * d / s
    if m_axis:
        # a - s = 1 / (a + s)
        val = val * (a + s) ** (-float(m_axis))
    if rest.any():
        val = val * np.prod(np.cos(theta * rest[None, :]), axis=1)
    return val


def _gauss_box_nodes(dim: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(m)
    # map [-1, 1] -> [0, 1]
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    grids = np.stack(np.meshgrid(*([nodes] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    w = np.ones(grids.shape[0])
    for axis_w in np.meshgrid(*([weights] * dim), indexing="ij"):
        w = w * axis_w.reshape(-1)
    return grids, w


def _shell_integral(level: int, dim: int, unit_nodes: np.ndarray, unit_w: np.ndarray,
                    m_axis: int, rest: np.ndarray, d: int) -> float:
    h = np.pi * 2.0 ** (-level - 1)
    total = 0.0
    for corner in itertools.product((0, 1), repeat=dim):
        if not any(corner):
            continue
        offset = np.asarray(corner, dtype=float) * h
        theta = offset[None, :] + h * unit_nodes
        total += float(np.dot(unit_w, _integrand(theta, m_axis, rest, d))) * h ** dim
    return total


def _node_count(d: int, x: tuple[int, ...]) -> int:
    base = 16 + 2 * (max(x) if x else 0)
    cap = 64 if d == 3 else (28 if d == 4 else 12)
    return int(min(base, cap))


def _quadrature(x: tuple[int, ...], d: int, m: int, tol: float, max_levels: int) -> tuple[float, int]:
    dim = d - 1
    m_axis, rest = x[0], np.asarray(x[1:], dtype=float)
    unit_nodes, unit_w = _gauss_box_nodes(dim, m)
    ratio = 2.0 ** (-(d - 2))

    total = 0.0
    last = None
    for level in range(max_levels):
        contribution = _shell_integral(level, dim, unit_nodes, unit_w, m_axis, rest, d)
        total += contribution
        last = contribution
        if level >= 3 and abs(contribution) < tol:
            break
    else:
        raise QuadratureError(
            f"g_Z^d quadrature did not converge within {max_levels} levels",
            details={"x": list(x), "d": d, "last_contribution": last, "tol": tol},
        )
    # Shells below the last one scale by 2^-(d-2) each
    total += last * ratio / (1.0 - ratio)
    # Fold of [-pi, pi]^(d-1) onto [0, pi]^(d-1), then the (2 pi)^-d prefactor
    return total * 2.0 ** dim / (2.0 * np.pi) ** d, level + 1


@lru_cache(maxsize=4096)
def _green_zd_cached(x: tuple[int, ...], d: int, tol: float, max_levels: int) -> QuadratureResult:
    m = _node_count(d, x)
    value, levels = _quadrature(x, d, m, tol, max_levels)
    coarse, _ = _quadrature(x, d, max(m - 6, 8), tol, max_levels)
    error = abs(value - coarse) + tol
    if error > GREEN_ZD_ACCURACY:
        raise QuadratureError(
            f"g_Z^d quadrature error estimate {error:.3e} above {GREEN_ZD_ACCURACY:.0e}",
            details={"x": list(x), "d": d, "error_estimate": error, "value": value},
        )
    logger.debug("green_zd x=%s d=%d value=%.12f err=%.2e levels=%d", x, d, value, error, levels)
    return QuadratureResult(value=value, error_estimate=error, levels=levels)


def green_zd_quadrature(x: Sequence[int], d: int) -> QuadratureResult:
    """
    g(0, x) on Z^d with its error estimate.

    Args:
        x: Displacement with d integer coordinates
        d: Dimension, d >= 3

    Returns:
        QuadratureResult: value, error estimate (<= 1e-6), refinement depth

    Raises:
        UnsupportedDimensionError: If d < 3
        ValidationError: If x does not have d coordinates
        QuadratureError: If refinement does not converge
    """
    _check_dimension(d)
    if len(x) != d:
        raise ValidationError(
            f"Displacement has {len(x)} coordinates, expected {d}", details={"x": list(x), "d": d}
        )
    return _green_zd_cached(
        canonical_displacement(x), d, settings.quadrature_tol * 1e-2, settings.quadrature_max_levels
    )


def green_zd(x: Sequence[int], d: int) -> float:
    """
    Green's function g_{Z^d}(0, x) of the simple random walk.

    Args:
        x: Displacement with d integer coordinates
        d: Dimension, d >= 3

    Returns:
        float: Expected number of visits to x starting from 0 (accuracy 1e-6)

    Example:
        >>> round(green_zd((0, 0, 0), 3), 6)
        1.516386
    """
    return green_zd_quadrature(x, d).value


def lattice_green_origin(d: int) -> float:
    """
    v = g_{Z^d}(0, 0) as used by the normalizing constants.

    For d = 3 the frozen value `settings.golden_green_d3` is returned so that
    every module and run shares the same constant; other d are computed.
    """
    _check_dimension(d)
    if d == 3:
        return settings.golden_green_d3
    return green_zd((0,) * d, d)


# ---------------------------------------------------------------------------
# Independent oracle: return-probability series (d = 3)
# ---------------------------------------------------------------------------

def return_probability_d3(half_steps: int) -> float:
    """
    P_0[X_{2k} = 0] for the walk on Z^3, k = half_steps.

    Closed walks of length 2k number C(2k, k) sum_i C(k, i)^2 C(2k - 2i, k - i).
    """
    k = half_steps
    i = np.arange(k + 1)
    log_ck = gammaln(k + 1) - gammaln(i + 1) - gammaln(k - i + 1)
    log_central = gammaln(2 * (k - i) + 1) - 2 * gammaln(k - i + 1)
    log_sum = logsumexp(2 * log_ck + log_central)
    log_c2k = gammaln(2 * k + 1) - 2 * gammaln(k + 1)
    return float(np.exp(log_c2k + log_sum - 2 * k * math.log(6.0)))


def green_zd_series(half_steps: int = 4000) -> float:
    """
    g_{Z^3}(0, 0) as sum_k P^{2k}(0, 0) with a local-CLT tail.

    The tail sum over k > K uses P^{2k}(0, 0) ~ 2 (3 / (4 pi k))^{3/2},
    integrated from K + 1/2.

    Args:
        half_steps: Truncation K of the exact partial sum

    Returns:
        float: Series estimate of g_{Z^3}(0, 0)
    """
    partial = sum(return_probability_d3(k) for k in range(half_steps + 1))
    tail = 4.0 * (3.0 / (4.0 * np.pi)) ** 1.5 / math.sqrt(half_steps + 0.5)
    logger.debug("Return-probability series: partial=%.9f tail=%.3e", partial, tail)
    return partial + tail
