"""
Extreme-value constants, point patterns and maxima.

Exports:
    NormalizingConstants, normalizing_constants, threshold: a_N, b_N, u_N(delta)
    PointPattern, extract_point_pattern, exceedance_count: the extremal process
    FieldMaximum, field_maximum: normalized maxima
    rescale, unscale: height maps
    export_point_pattern, point_pattern_frame: CSV export

Example:
    from ZAGFF.services.extremes import normalizing_constants, threshold

    c = normalizing_constants(8000, 1.5163861)
    threshold(c, 1.0)   # about 4.8687
"""

from .constants import NormalizingConstants, normalizing_constants, threshold
from .pattern import (
    FieldMaximum,
    PointPattern,
    exceedance_count,
    export_point_pattern,
    extract_point_pattern,
    field_maximum,
    point_pattern_frame,
    rescale,
    unscale,
)

__all__ = [
    "FieldMaximum",
    "NormalizingConstants",
    "PointPattern",
    "exceedance_count",
    "export_point_pattern",
    "extract_point_pattern",
    "field_maximum",
    "normalizing_constants",
    "point_pattern_frame",
    "rescale",
    "threshold",
    "unscale",
]
