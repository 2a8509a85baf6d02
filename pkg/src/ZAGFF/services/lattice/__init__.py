"""
Torus and Z^d geometry.

Exports:
    FieldConfig: torus geometry (d, n, N)
    project, representative, torus_add, torus_distance: point operations
    bulk_region_contains, bulk_bounds, bulk_region_mask: the bulk region R_n
    Region: finite site sets for killed walks

Example:
    from ZAGFF.services.lattice import FieldConfig, project

    cfg = FieldConfig(d=3, n=5)
    project((7, -2, 4), cfg)   # (2, 3, 4)
"""

from .geometry import (
    FieldConfig,
    LatticePoint,
    TorusPoint,
    all_sites,
    boundary_layer_approx,
    boundary_layer_size,
    bulk_bounds,
    bulk_region_contains,
    bulk_region_mask,
    bulk_region_size,
    project,
    representative,
    site_from_index,
    site_index,
    torus_add,
    torus_distance,
    torus_distances_from_origin,
    unit_directions,
)
from .region import Region

__all__ = [
    "FieldConfig",
    "LatticePoint",
    "TorusPoint",
    "Region",
    "all_sites",
    "boundary_layer_approx",
    "boundary_layer_size",
    "bulk_bounds",
    "bulk_region_contains",
    "bulk_region_mask",
    "bulk_region_size",
    "project",
    "representative",
    "site_from_index",
    "site_index",
    "torus_add",
    "torus_distance",
    "torus_distances_from_origin",
    "unit_directions",
]
