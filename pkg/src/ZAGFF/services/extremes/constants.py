"""
Extreme-value normalizing constants of the field.

    b_N = sqrt(v) [ sqrt(2 log N) - (log log N + log 4 pi) / (2 sqrt(2 log N)) ]
    a_N = v / b_N
    u_N(delta) = a_N delta + b_N

These are the i.i.d. Gaussian centering and scaling with variance
v = g_{Z^d}(0, 0). v is injected by the caller so every module and run uses
the same frozen constant.
"""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict

from ...core.exceptions import ValidationError


class NormalizingConstants(BaseModel):
    """
    Constants a_N, b_N for N sites and variance v.

    Attributes:
        N (int): Number of torus sites n^d
        v (float): g_{Z^d}(0, 0)
        b_N (float): Centering
        a_N (float): Scaling, a_N * b_N = v
    """

    model_config = ConfigDict(frozen=True)

    N: int
    v: float
    b_N: float
    a_N: float


def normalizing_constants(N: int, v: float) -> NormalizingConstants:
    """
    Build a_N and b_N.

    Args:
        N: Number of sites, N >= 3 so that log log N is defined and positive
        v: Variance g_{Z^d}(0, 0), v > 0

    Returns:
        NormalizingConstants: Frozen constants

    Raises:
        ValidationError: If N < 3 or v <= 0

    Example:
        >>> c = normalizing_constants(8000, 1.5163861)
        >>> round(c.b_N, 4), round(c.a_N, 5)
        (4.5343, 0.33443)
    """
    if N < 3:
        raise ValidationError(f"normalizing_constants requires N >= 3, got {N}", details={"N": N})
    if not v > 0:
        raise ValidationError(f"normalizing_constants requires v > 0, got {v}", details={"v": v})

    root = math.sqrt(2.0 * math.log(N))
    # positive for every N >= 3
    b_N = math.sqrt(v) * (root - (math.log(math.log(N)) + math.log(4.0 * math.pi)) / (2.0 * root))
    return NormalizingConstants(N=int(N), v=float(v), b_N=b_N, a_N=v / b_N)


def threshold(constants: NormalizingConstants, delta: float) -> float:
    """u_N(delta) = a_N delta + b_N."""
    return constants.a_N * delta + constants.b_N
