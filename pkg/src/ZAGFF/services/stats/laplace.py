"""
Laplace functionals of extremal point patterns.

For the limit Poisson measure with intensity dt x e^{-z} dz,

    E[exp(-eta(f))] = exp(-int int (1 - e^{-f(t, z)}) e^{-z} dz dt),

which for f = c 1_{B x (delta, inf]} is exp(-(1 - e^{-c}) |B| e^{-delta}).
General test functions are accepted as callables; only the indicator family
has a theoretical value.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from ...core.exceptions import ValidationError
from ...core.logging_config import get_logger
from ..extremes import PointPattern
from .bands import DEFAULT_BANDS, AcceptanceBands

logger = get_logger(__name__)

PatternFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


class IndicatorFunction(BaseModel):
    """
    f(t, z) = c 1{t in [lo, hi)} 1{z > delta}.

    Attributes:
        c (float): Height of the indicator, c >= 0 (inf allowed)
        delta (float): Lower end of the height support
        lo, hi (Optional[list[float]]): Box B in [0, 1]^d; None means [0, 1)^d
    """

    c: float = Field(default=1.0, ge=0.0)
    delta: float = 0.0
    lo: Optional[list[float]] = None
    hi: Optional[list[float]] = None

    @model_validator(mode="after")
    def _check_box(self) -> "IndicatorFunction":
        if (self.lo is None) != (self.hi is None):
            raise ValidationError("lo and hi must be given together", details={"lo": self.lo, "hi": self.hi})
        if self.lo is not None:
            lo, hi = np.asarray(self.lo), np.asarray(self.hi)
            if lo.shape != hi.shape or np.any(lo < 0) or np.any(hi > 1) or np.any(hi < lo):
                raise ValidationError("Box must satisfy 0 <= lo <= hi <= 1", details={"lo": self.lo, "hi": self.hi})
        return self

    def describe(self) -> str:
        box = "[0,1)^d" if self.lo is None else f"[{self.lo}, {self.hi})"
        return f"{self.c:g} * 1{{t in {box}, z > {self.delta:g}}}"

    def volume(self) -> float:
        """|B|."""
        if self.lo is None:
            return 1.0
        return float(np.prod(np.asarray(self.hi) - np.asarray(self.lo)))

    def evaluate(self, pattern: PointPattern) -> float:
        """eta(f) for one pattern."""
        k = pattern.count(self.delta, self.lo, self.hi)
        return self.c * k if k else 0.0

    def limit_value(self) -> float:
        """exp(-(1 - e^{-c}) |B| e^{-delta})."""
        return math.exp(-(1.0 - math.exp(-self.c)) * self.volume() * math.exp(-self.delta))


class LaplaceReport(BaseModel):
    """
    Empirical vs limit Laplace functional.

    Attributes:
        test_function (str): Descriptor of f
        replicates (int): Number of patterns
        empirical (float): Mean of exp(-eta(f))
        std_error (float): Its standard error
        theoretical (Optional[float]): Limit value (indicator family only)
        acceptance (dict[str, bool]): `within_se_of_limit` when a limit exists
    """

    test_function: str
    replicates: int
    empirical: float
    std_error: float
    theoretical: Optional[float] = None
    acceptance: dict[str, bool]


def laplace_report(
    eta_values: np.ndarray,
    f: Union[IndicatorFunction, str],
    bands: AcceptanceBands = DEFAULT_BANDS,
) -> LaplaceReport:
    """Aggregate per-pattern values eta(f) into a LaplaceReport."""
    eta = np.asarray(eta_values, dtype=np.float64)
    if eta.size == 0:
        raise ValidationError("laplace_report needs at least one pattern", details={})
    samples = np.exp(-eta)
    empirical = float(samples.mean())
    se = float(samples.std(ddof=1) / math.sqrt(samples.size)) if samples.size > 1 else 0.0

    theoretical = f.limit_value() if isinstance(f, IndicatorFunction) else None
    acceptance = {}
    if theoretical is not None:
        acceptance["within_se_of_limit"] = abs(empirical - theoretical) <= bands.se_multiple * se
    return LaplaceReport(
        test_function=f.describe() if isinstance(f, IndicatorFunction) else f,
        replicates=int(eta.size),
        empirical=empirical,
        std_error=se,
        theoretical=theoretical,
        acceptance=acceptance,
    )


def laplace_experiment(
    patterns: Iterable[PointPattern],
    f: Union[IndicatorFunction, PatternFunction],
    delta: Optional[float] = None,
    bands: AcceptanceBands = DEFAULT_BANDS,
) -> LaplaceReport:
    """
    Empirical Laplace functional E[exp(-eta(f))] over patterns.

    Args:
        patterns: Point patterns, one per replicate
        f: Indicator test function, or a callable f(locations, heights) >= 0
        delta: Lower end of a callable's height support (required for callables)
        bands: Acceptance thresholds

    Returns:
        LaplaceReport: Empirical value, standard error and the limit value

    Raises:
        ValidationError: If f's support reaches below a pattern floor, a
            callable comes without delta, or f takes negative values
    """
    if isinstance(f, IndicatorFunction):
        support = f.delta
    else:
        if delta is None:
            raise ValidationError("A callable test function needs its support level delta", details={})
        support = float(delta)

    eta = []
    for pattern in patterns:
        if support < pattern.floor:
            raise ValidationError(
                f"Test function support starts at {support}, below the pattern floor {pattern.floor}",
                details={"delta": support, "floor": pattern.floor},
            )
        if isinstance(f, IndicatorFunction):
            eta.append(f.evaluate(pattern))
        else:
            keep = pattern.heights > support
            vals = np.asarray(f(pattern.locations[keep], pattern.heights[keep]), dtype=np.float64)
            if np.any(vals < 0):
                raise ValidationError("Test function must be nonnegative", details={})
            eta.append(float(vals.sum()))

    label = f if isinstance(f, IndicatorFunction) else getattr(f, "__name__", "callable")
    report = laplace_report(np.asarray(eta), label, bands)
    logger.debug("Laplace %s: empirical=%.5f theoretical=%s", report.test_function, report.empirical, report.theoretical)
    return report
