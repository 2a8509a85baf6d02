"""
Zero-average Green's function on the discrete torus.

G_T(x, y) = int_0^inf (P_x[X_t = y] - 1/N) dt for the continuous-time walk
with Exp(1) holding times. Diagonalising I - P by characters gives

    G_T(x, 0) = (1/N) sum_{k != 0} cos(2 pi k . x / n) / lambda_k,
    lambda_k  = 1 - (1/d) sum_j cos(2 pi k_j / n),

computed in O(N log N) by one inverse FFT of 1/lambda with the k = 0 mode
zeroed; dropping that mode is exactly the -1/N subtraction. The dense
pseudo-inverse of I - P is kept as an oracle for small tori.

Module Input:
    - FieldConfig (d, n)

Module Output:
    - GreenTable (values and eigenvalues), decay profile, convergence report
    - CSV export of the table
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd
import scipy.fft
import scipy.linalg
from pydantic import BaseModel

from ...core.exceptions import ExportError, ResourceLimitError, ValidationError, VerificationError
from ...core.logging_config import get_logger
from ...core.settings import settings
from ..lattice import FieldConfig, all_sites, torus_distances_from_origin, unit_directions
from .zd import lattice_green_origin

logger = get_logger(__name__)


@dataclass(frozen=True)
class GreenTable:
    """
    Translation-invariant covariance G_T(x, 0) with its spectral symbols.

    Attributes:
        cfg (FieldConfig): Torus geometry
        values (np.ndarray): G_T(x, 0), shape cfg.shape
        eigenvalues (np.ndarray): lambda_k, shape cfg.shape; lambda_0 = 0 is excluded
    """

    cfg: FieldConfig
    values: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)

    @property
    def v_n(self) -> float:
        """G_T(0, 0)."""
        return float(self.values[(0,) * self.cfg.d])

    def value(self, x: Sequence[int]) -> float:
        """G_T(x, 0) for a displacement x (reduced mod n)."""
        idx = tuple(int(c) % self.cfg.n for c in x)
        return float(self.values[idx])

    def at(self, displacements: np.ndarray) -> np.ndarray:
        """Vectorised G_T(x, 0) for an (m, d) array of displacements."""
        disp = np.mod(np.atleast_2d(np.asarray(displacements, dtype=np.int64)), self.cfg.n)
        return self.values[tuple(disp.T)]

    def dense(self) -> np.ndarray:
        """
        Full N x N covariance G_T(x, y) in row-major site order.

        Raises:
            ResourceLimitError: If N exceeds `settings.dense_max_sites`
        """
        if self.cfg.N > settings.dense_max_sites:
            raise ResourceLimitError(
                f"Dense covariance of {self.cfg.N} sites exceeds the limit",
                details={"N": self.cfg.N, "limit": settings.dense_max_sites},
            )
        sites = all_sites(self.cfg)
        diff = np.mod(sites[:, None, :] - sites[None, :, :], self.cfg.n)
        return self.values[tuple(np.moveaxis(diff, -1, 0))]

    def invariant_residuals(self) -> dict[str, float]:
        """
        Residuals of the table invariants.

        Returns:
            dict[str, float]: `symmetry` = max |G(x) - G(-x)|, `row_sum` = |sum_x G(x)|,
            `min_nonzero_eigenvalue` = smallest lambda_k over k != 0
        """
        flipped = np.roll(np.flip(self.values), shift=1, axis=tuple(range(self.cfg.d)))
        nonzero = self.eigenvalues.reshape(-1)[1:]
        return {
            "symmetry": float(np.max(np.abs(self.values - flipped))),
            "row_sum": float(abs(self.values.sum())),
            "min_nonzero_eigenvalue": float(nonzero.min()),
        }

    def perturbed(self, epsilon: float) -> "GreenTable":
        """Copy with G(0, 0) shifted by epsilon (fault injection for the verify suite)."""
        values = self.values.copy()
        values[(0,) * self.cfg.d] += epsilon
        return replace(self, values=values)


def eigenvalue_table(cfg: FieldConfig) -> np.ndarray:
    """
    lambda_k = 1 - (1/d) sum_j cos(2 pi k_j / n) over all frequency vectors.

    Returns:
        np.ndarray: Shape cfg.shape; entry [0, ..., 0] is exactly 0
    """
    cos_axis = np.cos(2.0 * np.pi * np.arange(cfg.n) / cfg.n)
    total = np.zeros(cfg.shape)
    for axis in range(cfg.d):
        view = [1] * cfg.d
        view[axis] = cfg.n
        total = total + cos_axis.reshape(view)
    lam = 1.0 - total / cfg.d
    lam[(0,) * cfg.d] = 0.0
    return lam


def inverse_eigenvalues(eigenvalues: np.ndarray) -> np.ndarray:
    """1/lambda_k with the k = 0 mode set to zero."""
    inv = np.zeros_like(eigenvalues)
    mask = np.ones(eigenvalues.shape, dtype=bool)
    mask[(0,) * eigenvalues.ndim] = False
    inv[mask] = 1.0 / eigenvalues[mask]
    return inv


def zero_average_green(cfg: FieldConfig) -> GreenTable:
    """
    Build the zero-average Green's function table by FFT.

    Args:
        cfg: Torus geometry

    Returns:
        GreenTable: values[x] = G_T(x, 0) and the eigenvalue table

    Raises:
        ResourceLimitError: When the arrays cannot be allocated

    Example:
        >>> round(zero_average_green(FieldConfig(d=3, n=3)).v_n, 7)
        1.0864198
    """
    try:
        lam = eigenvalue_table(cfg)
        values = np.real(scipy.fft.ifftn(inverse_eigenvalues(lam)))
    except MemoryError as e:
        raise ResourceLimitError(
            f"Cannot allocate Green table for N={cfg.N}", details={"N": cfg.N, "error": str(e)}
        )
    values = np.ascontiguousarray(values)
    values.setflags(write=False)
    lam.setflags(write=False)
    logger.debug("Green table built: d=%d n=%d v_n=%.10f", cfg.d, cfg.n, values.flat[0])
    return GreenTable(cfg=cfg, values=values, eigenvalues=lam)


def transition_matrix(cfg: FieldConfig) -> np.ndarray:
    """Dense one-step matrix P of the walk on T_n^d (row-major site order)."""
    if cfg.N > settings.dense_max_sites:
        raise ResourceLimitError(
            f"Dense transition matrix of {cfg.N} sites exceeds the limit",
            details={"N": cfg.N, "limit": settings.dense_max_sites},
        )
    sites = all_sites(cfg)
    steps = unit_directions(cfg.d)
    P = np.zeros((cfg.N, cfg.N))
    rows = np.arange(cfg.N)
    for step in steps:
        target = np.ravel_multi_index(tuple(np.mod(sites + step, cfg.n).T), cfg.shape)
        np.add.at(P, (rows, target), 1.0 / len(steps))
    return P


def zero_average_green_dense(cfg: FieldConfig) -> np.ndarray:
    """
    Mean-zero pseudo-inverse of I - P, the oracle for the spectral table.

    Returns:
        np.ndarray: N x N matrix in row-major site order
    """
    laplacian = np.eye(cfg.N) - transition_matrix(cfg)
    return scipy.linalg.pinvh(laplacian)


# ---------------------------------------------------------------------------
# Decay profile
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecayProfile:
    """
    max |G_T(x, 0)| per graph distance and the fitted bound constant.

    Attributes:
        cfg (FieldConfig): Torus geometry
        frame (pd.DataFrame): Columns `distance`, `max_abs_G`, `sites`
        c_star (float): Smallest c with |G(x,0)| <= c (log n)^{3d/2} d_T(x,0)^{2-d}, x != 0
    """

    cfg: FieldConfig
    frame: pd.DataFrame = field(repr=False)
    c_star: float

    @property
    def max_distance_value(self) -> float:
        return float(self.frame["max_abs_G"].iloc[-1])


def decay_profile_torus(table: GreenTable) -> DecayProfile:
    """
    Decay of |G_T| with torus distance.

    The exponentially small second term of the torus bound is ignored.

    Args:
        table: Green table of the torus

    Returns:
        DecayProfile: Per-distance maxima and the fitted constant c*
    """
    cfg = table.cfg
    dist = torus_distances_from_origin(cfg).reshape(-1)
    absg = np.abs(table.values).reshape(-1)

    frame = (
        pd.DataFrame({"distance": dist, "abs_G": absg})
        .groupby("distance", sort=True)
        .agg(max_abs_G=("abs_G", "max"), sites=("abs_G", "size"))
        .reset_index()
    )

    nonzero = dist > 0
    shape = np.log(cfg.n) ** (1.5 * cfg.d) * dist[nonzero].astype(float) ** (2 - cfg.d)
    c_star = float(np.max(absg[nonzero] / shape))
    return DecayProfile(cfg=cfg, frame=frame, c_star=c_star)


# ---------------------------------------------------------------------------
# Convergence of v_n = G_T(0, 0) to v = g(0, 0)
# ---------------------------------------------------------------------------

class ConvergenceRow(BaseModel):
    """One n of the convergence report."""

    n: int
    v_n: float
    v: float
    gap: float
    bound: float
    gap_times_n: float
    gap_times_threshold_sq: float


class ConvergenceReport(BaseModel):
    """
    |G_T(0,0) - g(0,0)| across side lengths.

    Attributes:
        d (int): Dimension
        rows (list[ConvergenceRow]): One row per n, increasing n
        gaps_decreasing (bool): Whether gaps strictly decrease along n
    """

    d: int
    rows: list[ConvergenceRow]
    gaps_decreasing: bool

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.model_dump() for row in self.rows])


def convergence_report(n_list: Sequence[int], d: int, strict: bool = True) -> ConvergenceReport:
    """
    Gap between v_n and v with the (log n)^{3d/2} n^{2-d} bound shape.

    Args:
        n_list: Side lengths, each >= 3
        d: Dimension
        strict: Raise when the gaps are not strictly decreasing

    Returns:
        ConvergenceReport: Rows sorted by n

    Raises:
        ValidationError: If some n < 3
        VerificationError: If strict and gaps do not strictly decrease
    """
    # Deferred: extremes imports the sampler, which imports this module
    from ..extremes.constants import normalizing_constants

    ns = sorted(set(int(n) for n in n_list))
    if not ns or ns[0] < 3:
        raise ValidationError("convergence_report requires n >= 3", details={"n_list": list(n_list)})

    v = lattice_green_origin(d)
    rows = []
    for n in ns:
        table = zero_average_green(FieldConfig(d=d, n=n))
        gap = abs(table.v_n - v)
        constants = normalizing_constants(n ** d, v)
        rows.append(
            ConvergenceRow(
                n=n,
                v_n=table.v_n,
                v=v,
                gap=gap,
                bound=float(np.log(n) ** (1.5 * d) * float(n) ** (2 - d)),
                gap_times_n=gap * n,
                gap_times_threshold_sq=gap * constants.b_N ** 2,
            )
        )
        logger.info("Convergence n=%d: v_n=%.10f gap=%.3e", n, table.v_n, gap)

    gaps = [row.gap for row in rows]
    decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    if strict and not decreasing:
        raise VerificationError(
            "Gaps |v_n - v| are not strictly decreasing",
            details={"n": ns, "gaps": gaps},
        )
    return ConvergenceReport(d=d, rows=rows, gaps_decreasing=decreasing)


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def green_table_frame(table: GreenTable) -> pd.DataFrame:
    """Table as rows (dx_1, ..., dx_d, G_value) in lexicographic displacement order."""
    sites = all_sites(table.cfg)
    frame = pd.DataFrame(sites, columns=[f"dx_{j + 1}" for j in range(table.cfg.d)])
    frame["G_value"] = table.values.reshape(-1)
    return frame


def export_green_table(table: GreenTable, path: Path) -> Path:
    """
    Write the table as CSV with round-trip float formatting.

    Raises:
        ExportError: On I/O failure
    """
    try:
        green_table_frame(table).to_csv(path, index=False, float_format="%.17g")
    except OSError as e:
        raise ExportError(f"Failed to write Green table: {path}", details={"path": str(path), "error": str(e)})
    logger.info("Wrote Green table (%d rows) to %s", table.cfg.N, path)
    return path
