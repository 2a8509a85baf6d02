"""
Extremal point patterns and field maxima.

A field Psi on the torus gives the point pattern

    eta_n = sum_alpha  delta_{(alpha / n, (Psi(alpha) - b_N) / a_N)}

which is stored restricted to heights above a finite floor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel

from ...core.exceptions import ExportError, ValidationError
from ...core.logging_config import get_logger
from ...core.settings import settings
from ..lattice import FieldConfig, all_sites
from ..sampler import TorusField
from .constants import NormalizingConstants

logger = get_logger(__name__)


def rescale(values: np.ndarray, constants: NormalizingConstants) -> np.ndarray:
    """(Psi - b_N) / a_N."""
    return (np.asarray(values, dtype=np.float64) - constants.b_N) / constants.a_N


def unscale(heights: np.ndarray, constants: NormalizingConstants) -> np.ndarray:
    """a_N h + b_N, the inverse of `rescale`."""
    return constants.a_N * np.asarray(heights, dtype=np.float64) + constants.b_N


def _check_constants(cfg: FieldConfig, constants: NormalizingConstants) -> None:
    if constants.N != cfg.N:
        raise ValidationError(
            f"Constants built for N={constants.N}, field has N={cfg.N}",
            details={"constants_N": constants.N, "field_N": cfg.N},
        )


@dataclass(frozen=True)
class PointPattern:
    """
    Points (location, height) with height > floor.

    Patterns extracted from a field list sites in row-major order and carry
    their geometry and constants; synthetic patterns leave both unset.

    Attributes:
        floor (float): Storage cutoff
        locations (np.ndarray): (k, d) points of [0, 1)^d
        heights (np.ndarray): (k,) rescaled values
        cfg (Optional[FieldConfig]): Torus geometry of the source field
        constants (Optional[NormalizingConstants]): Constants used for the heights
    """

    floor: float
    locations: np.ndarray = field(repr=False)
    heights: np.ndarray = field(repr=False)
    cfg: Optional[FieldConfig] = None
    constants: Optional[NormalizingConstants] = None

    @property
    def d(self) -> int:
        return int(self.locations.shape[1])

    @property
    def sites(self) -> np.ndarray:
        """Torus sites alpha = n * location."""
        if self.cfg is None:
            raise ValidationError("Synthetic pattern has no torus sites", details={})
        return np.rint(self.locations * self.cfg.n).astype(np.int64)

    def __len__(self) -> int:
        return int(self.heights.shape[0])

    def restrict(self, floor: float) -> "PointPattern":
        """
        Pattern above a higher floor.

        Raises:
            ValidationError: If floor is below the stored floor
        """
        if floor < self.floor:
            raise ValidationError(
                f"Cannot lower the floor from {self.floor} to {floor}",
                details={"floor": self.floor, "requested": floor},
            )
        keep = self.heights > floor
        return PointPattern(float(floor), self.locations[keep], self.heights[keep], self.cfg, self.constants)

    def count(self, delta: float, lo: Optional[Sequence[float]] = None, hi: Optional[Sequence[float]] = None) -> int:
        """
        Points with height > delta and location in the box [lo, hi).

        Raises:
            ValidationError: If delta is below the stored floor
        """
        if delta < self.floor:
            raise ValidationError(
                f"Level {delta} lies below the pattern floor {self.floor}",
                details={"delta": delta, "floor": self.floor},
            )
        mask = self.heights > delta
        if lo is not None or hi is not None:
            loc = self.locations
            lo_arr = np.zeros(self.d) if lo is None else np.asarray(lo, dtype=float)
            hi_arr = np.ones(self.d) if hi is None else np.asarray(hi, dtype=float)
            mask &= np.all((loc >= lo_arr) & (loc < hi_arr), axis=1)
        return int(mask.sum())


def extract_point_pattern(
    field: TorusField,
    constants: NormalizingConstants,
    floor: Optional[float] = None,
) -> PointPattern:
    """
    Extremal point pattern of a field above a floor.

    Args:
        field: Torus field
        constants: Constants built for N = field N
        floor: Storage cutoff (default settings.pattern_floor)

    Returns:
        PointPattern: One point per site with rescaled value > floor

    Raises:
        ValidationError: If constants.N differs from the field's N
    """
    _check_constants(field.cfg, constants)
    cutoff = settings.pattern_floor if floor is None else float(floor)
    heights = rescale(field.flat, constants)
    keep = np.flatnonzero(heights > cutoff)
    locations = all_sites(field.cfg)[keep] / field.cfg.n
    return PointPattern(cutoff, locations, heights[keep], field.cfg, constants)


def exceedance_count(field: TorusField, constants: NormalizingConstants, delta: float) -> int:
    """#{alpha : Psi(alpha) > u_N(delta)}, counted on the rescaled scale like the pattern."""
    _check_constants(field.cfg, constants)
    return int(np.count_nonzero(rescale(field.flat, constants) > delta))


class FieldMaximum(BaseModel):
    """
    Maximum of a field.

    Attributes:
        site (list[int]): Lexicographically smallest argmax
        raw (float): max Psi
        rescaled (float): (max Psi - b_N) / a_N
    """

    site: list[int]
    raw: float
    rescaled: float


def field_maximum(field: TorusField, constants: NormalizingConstants) -> FieldMaximum:
    """
    Maximum, its site and its rescaled value.

    np.argmax returns the first maximiser in row-major order, which is the
    lexicographically smallest site.
    """
    _check_constants(field.cfg, constants)
    flat = field.flat
    i = int(np.argmax(flat))
    raw = float(flat[i])
    site = [int(c) for c in np.unravel_index(i, field.cfg.shape)]
    return FieldMaximum(site=site, raw=raw, rescaled=float(rescale(raw, constants)))


def point_pattern_frame(pattern: PointPattern) -> pd.DataFrame:
    """Pattern as rows (loc_1, ..., loc_d, height) sorted by height descending."""
    frame = pd.DataFrame(pattern.locations, columns=[f"loc_{j + 1}" for j in range(pattern.d)])
    frame["height"] = pattern.heights
    return frame.sort_values("height", ascending=False, kind="mergesort").reset_index(drop=True)


def export_point_pattern(pattern: PointPattern, path: Path) -> Path:
    """
    Write the pattern CSV.

    Raises:
        ExportError: On I/O failure
    """
    try:
        point_pattern_frame(pattern).to_csv(path, index=False, float_format="%.17g")
    except OSError as e:
        raise ExportError(f"Failed to write point pattern: {path}", details={"path": str(path), "error": str(e)})
    logger.debug("Wrote %d points to %s", len(pattern), path)
    return Path(path)
