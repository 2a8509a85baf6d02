"""
Residual checks of the Green's function decompositions.

    Z^d:    g(x, y) = g^V(x, y) + E_x[g(X_{T_V}, y)]
    torus:  G(x, y) = g^U(x, y) + E_x[G(X_{T_U}, y)] - E_x[T_U] / n^d

Each check returns the absolute residual; all torus terms are exact linear
algebra, the Z^d check is limited by the quadrature accuracy of g.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel

from ...core.exceptions import ValidationError
from ...core.logging_config import get_logger
from ..lattice import FieldConfig, Region
from .killed import KilledGreenSolve, exit_time_bound
from .torus import GreenTable, zero_average_green
from .zd import green_zd, lattice_green_origin

logger = get_logger(__name__)

# Contract tolerances
ZD_IDENTITY_TOL = 1e-5
TORUS_IDENTITY_TOL = 1e-8


def _green_zd_rows(points: np.ndarray, y: Sequence[int], d: int) -> np.ndarray:
    y_arr = np.asarray(y, dtype=np.int64)
    return np.array([green_zd(tuple(p - y_arr), d) for p in np.atleast_2d(points)])


def verify_spatial_markov_zd(V: Region, x: Sequence[int], y: Sequence[int]) -> float:
    """
    Residual of the spatial Markov property on Z^d.

    Args:
        V: Finite region of Z^d
        x: Start site
        y: Target site

    Returns:
        float: |g(x,y) - g^V(x,y) - E_x[g(X_{T_V}, y)]|, expected <= 1e-5

    Raises:
        ValidationError: If V is a torus region
    """
    if V.on_torus:
        raise ValidationError("verify_spatial_markov_zd expects a region of Z^d", details={"region": repr(V)})
    d = V.d
    solve = KilledGreenSolve(V)
    g_xy = green_zd(tuple(np.asarray(x) - np.asarray(y)), d)
    killed = solve.value(x, y)
    at_exit = solve.exit_expectation(x, lambda sites: _green_zd_rows(sites, y, d))
    residual = abs(g_xy - killed - at_exit)
    logger.debug("Z^d Markov: V=%s x=%s y=%s residual=%.3e", V, tuple(x), tuple(y), residual)
    return residual


def verify_markov_decomposition_torus(
    cfg: FieldConfig,
    U: Region,
    x: Sequence[int],
    y: Sequence[int],
    table: Optional[GreenTable] = None,
) -> float:
    """
    Residual of the zero-average decomposition on the torus.

    Args:
        cfg: Torus geometry
        U: Proper nonempty torus region
        x: Start site
        y: Target site
        table: Green table to test (built from cfg when omitted)

    Returns:
        float: |G(x,y) - g^U(x,y) - E_x[G(X_{T_U}, y)] + E_x[T_U] / n^d|, expected <= 1e-8

    Raises:
        ValidationError: If U is not a torus region of cfg, or U is the full torus
    """
    if U.cfg != cfg:
        raise ValidationError("U must be a torus region of cfg", details={"region": repr(U)})
    table = table or zero_average_green(cfg)
    y_arr = np.asarray(y, dtype=np.int64)

    solve = KilledGreenSolve(U)
    G_xy = table.value(np.asarray(x) - y_arr)
    killed = solve.value(x, y)
    at_exit = solve.exit_expectation(x, lambda sites: table.at(sites - y_arr))
    exit_time = solve.expected_exit_time(x)
    residual = abs(G_xy - killed - at_exit + exit_time / cfg.N)
    logger.debug("Torus Markov: U=%s x=%s y=%s residual=%.3e", U, tuple(x), tuple(y), residual)
    return residual


class CenterDecomposition(BaseModel):
    """
    Decomposition of G_T(0,0) at the centre of V = [1, n-2]^d, U = Pi_n(V).

    Attributes:
        n, d: Geometry
        center: floor(n/2) in every coordinate
        killed_match: max |g^U_T - g^V_{Z^d}| over the box (identical walks)
        killed_term: g^V(c, c)
        exit_green_term: E_c[G(X_{T_U}, c)]
        exit_time: E_c[T_V]
        exit_time_bound: (n sqrt(d) + 2)^2
        residual: |G(c,c) - killed_term - exit_green_term + exit_time / n^d|
        sup_boundary_zd: sup over the Z^d boundary of V of g(z, c)
        sup_boundary_torus: sup over the torus boundary of U of |G(z, c)|
        exit_time_term: exit_time / n^d
        estimate: sum of the three sup/exit terms (bounds the gap)
        gap: |v_n - v|
    """

    n: int
    d: int
    center: list[int]
    killed_match: float
    killed_term: float
    exit_green_term: float
    exit_time: float
    exit_time_bound: float
    residual: float
    sup_boundary_zd: float
    sup_boundary_torus: float
    exit_time_term: float
    estimate: float
    gap: float


def verify_center_decomposition(cfg: FieldConfig, table: Optional[GreenTable] = None) -> CenterDecomposition:
    """
    Exact terms of the |v_n - v| estimate chain.

    The killed walk in V = [1, n-2]^d never wraps, so g^U on the torus equals
    g^V on Z^d; the torus decomposition at c = floor(n/2) then splits v_n
    into a killed term, an exit term and the exit-time correction.

    Args:
        cfg: Torus geometry with n >= 4
        table: Green table (built from cfg when omitted)

    Returns:
        CenterDecomposition: All terms, the residual and the estimate

    Raises:
        ValidationError: If n < 4
    """
    if cfg.n < 4:
        raise ValidationError("Centre decomposition needs n >= 4", details={"n": cfg.n})
    table = table or zero_average_green(cfg)
    d, n = cfg.d, cfg.n
    center = np.full(d, n // 2, dtype=np.int64)

    V = Region.box([1] * d, [n - 2] * d)
    U = V.torus_image(cfg)
    solve_zd = KilledGreenSolve(V)
    solve_torus = KilledGreenSolve(U)
    killed_match = float(np.max(np.abs(solve_zd.matrix - solve_torus.matrix)))

    killed_term = solve_torus.value(center, center)
    exit_green = solve_torus.exit_expectation(center, lambda sites: table.at(sites - center))
    exit_time = solve_torus.expected_exit_time(center)
    residual = abs(table.v_n - killed_term - exit_green + exit_time / cfg.N)

    sup_zd = float(np.max(_green_zd_rows(solve_zd.boundary, center, d)))
    sup_torus = float(np.max(np.abs(table.at(solve_torus.boundary - center))))
    exit_time_term = exit_time / cfg.N

    result = CenterDecomposition(
        n=n,
        d=d,
        center=[int(c) for c in center],
        killed_match=killed_match,
        killed_term=killed_term,
        exit_green_term=exit_green,
        exit_time=exit_time,
        exit_time_bound=float(exit_time_bound(n, d)),
        residual=residual,
        sup_boundary_zd=sup_zd,
        sup_boundary_torus=sup_torus,
        exit_time_term=exit_time_term,
        estimate=sup_zd + sup_torus + exit_time_term,
        gap=abs(table.v_n - lattice_green_origin(d)),
    )
    logger.info(
        "Centre decomposition n=%d: residual=%.2e gap=%.4f estimate=%.4f",
        n, residual, result.gap, result.estimate,
    )
    return result
