"""
Finite site sets on Z^d or on the torus.

A Region is the state space of a killed walk: the exact solves in
`greens.killed` and the Monte Carlo walkers in `rwalk` both take one. Sites
are stored once, sorted lexicographically, and every membership or index
query is vectorised over (m, d) integer arrays.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np

from ...core.exceptions import ValidationError
from .geometry import FieldConfig, all_sites, unit_directions


class Region:
    """
    Finite, nonempty set of sites.

    Attributes:
        sites (np.ndarray): (m, d) int64 array, unique rows, lexicographic order
        cfg (Optional[FieldConfig]): Torus geometry, or None for a region of Z^d

    Thread Safety:
        Immutable after construction; safe to share across threads.
    """

    def __init__(self, sites: np.ndarray | Sequence[Sequence[int]], cfg: Optional[FieldConfig] = None):
        arr = np.atleast_2d(np.asarray(sites, dtype=np.int64))
        if arr.size == 0:
            raise ValidationError("Region must contain at least one site", details={})
        if cfg is not None:
            if arr.shape[1] != cfg.d:
                raise ValidationError(
                    f"Region sites have dimension {arr.shape[1]}, expected {cfg.d}",
                    details={"d": cfg.d},
                )
            arr = np.mod(arr, cfg.n)
        self.cfg = cfg
        self.sites = np.unique(arr, axis=0)
        self.d = self.sites.shape[1]
        self._steps = unit_directions(self.d)
        self._build_index()

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def box(cls, lo: Sequence[int], hi: Sequence[int], cfg: Optional[FieldConfig] = None) -> "Region":
        """Axis-aligned box prod_j [lo_j, hi_j] (inclusive), on Z^d or projected to the torus."""
        lo_arr = np.asarray(lo, dtype=np.int64)
        hi_arr = np.asarray(hi, dtype=np.int64)
        if np.any(hi_arr < lo_arr):
            raise ValidationError("Empty box", details={"lo": lo_arr.tolist(), "hi": hi_arr.tolist()})
        axes = [np.arange(a, b + 1) for a, b in zip(lo_arr, hi_arr)]
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
        return cls(mesh, cfg)

    @classmethod
    def linf_ball(cls, center: Sequence[int], radius: int, cfg: Optional[FieldConfig] = None) -> "Region":
        c = np.asarray(center, dtype=np.int64)
        return cls.box(c - radius, c + radius, cfg)

    @classmethod
    def l1_ball(cls, center: Sequence[int], radius: int, cfg: Optional[FieldConfig] = None) -> "Region":
        c = np.asarray(center, dtype=np.int64)
        cube = cls.box(c - radius, c + radius).sites
        keep = np.abs(cube - c).sum(axis=1) <= radius
        return cls(cube[keep], cfg)

    @classmethod
    def single_site(cls, x: Sequence[int], cfg: Optional[FieldConfig] = None) -> "Region":
        return cls([list(x)], cfg)

    @classmethod
    def torus_complement(cls, excluded: Iterable[Sequence[int]], cfg: FieldConfig) -> "Region":
        """All torus sites except `excluded`; must leave a proper nonempty subset."""
        everything = all_sites(cfg)
        drop = np.zeros(cfg.N, dtype=bool)
        for x in excluded:
            drop[np.ravel_multi_index(tuple(np.mod(np.asarray(x), cfg.n)), cfg.shape)] = True
        if not drop.any():
            raise ValidationError("Complement of nothing is the full torus", details={"n": cfg.n})
        return cls(everything[~drop], cfg)

    def torus_image(self, cfg: FieldConfig) -> "Region":
        """Projection of a Z^d region onto T_n^d."""
        return Region(self.sites, cfg)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------
    @property
    def size(self) -> int:
        return int(self.sites.shape[0])

    @property
    def on_torus(self) -> bool:
        return self.cfg is not None

    def is_full_torus(self) -> bool:
        return self.cfg is not None and self.size == self.cfg.N

    def _build_index(self) -> None:
        if self.cfg is not None:
            self._grid_lo = np.zeros(self.d, dtype=np.int64)
            shape = self.cfg.shape
        else:
            # One-site margin: a walker inside the region is always within it after a step
            self._grid_lo = self.sites.min(axis=0) - 1
            shape = tuple(int(s) for s in self.sites.max(axis=0) - self._grid_lo + 2)
        self._grid_shape = shape
        self._grid = np.full(shape, -1, dtype=np.int64)
        self._grid[tuple((self.sites - self._grid_lo).T)] = np.arange(self.size)

    def _normalise(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
        if pts.shape[1] != self.d:
            raise ValidationError(
                f"Points have dimension {pts.shape[1]}, expected {self.d}", details={"d": self.d}
            )
        if self.cfg is not None:
            pts = np.mod(pts, self.cfg.n)
        return pts

    def index_of(self, points: np.ndarray | Sequence[int]) -> np.ndarray:
        """
        Position of each point in `sites`, or -1 when outside the region.

        Args:
            points: One point (d,) or an (m, d) array

        Returns:
            np.ndarray: int64 array of shape (m,)
        """
        pts = self._normalise(points)
        rel = pts - self._grid_lo
        inside = np.all((rel >= 0) & (rel < np.asarray(self._grid_shape)), axis=1)
        out = np.full(pts.shape[0], -1, dtype=np.int64)
        if inside.any():
            out[inside] = self._grid[tuple(rel[inside].T)]
        return out

    def contains(self, points: np.ndarray | Sequence[int]) -> np.ndarray:
        """Vectorised membership; returns a boolean array of shape (m,)."""
        return self.index_of(points) >= 0

    def __contains__(self, x: Sequence[int]) -> bool:
        return bool(self.contains(x)[0])

    def neighbours(self, points: np.ndarray) -> np.ndarray:
        """All 2d neighbours, shape (m, 2d, d), wrapped on the torus."""
        pts = self._normalise(points)
        nb = pts[:, None, :] + self._steps[None, :, :]
        if self.cfg is not None:
            nb = np.mod(nb, self.cfg.n)
        return nb

    def exterior_boundary(self) -> np.ndarray:
        """
        Sites outside the region with a neighbour inside it.

        Returns:
            np.ndarray: (k, d) array, unique rows in lexicographic order
        """
        nb = self.neighbours(self.sites).reshape(-1, self.d)
        outside = nb[~self.contains(nb)]
        if outside.size == 0:
            return np.empty((0, self.d), dtype=np.int64)
        return np.unique(outside, axis=0)

    def __repr__(self) -> str:
        where = f"torus n={self.cfg.n}" if self.cfg is not None else "Z^d"
        return f"Region(size={self.size}, d={self.d}, {where})"
