"""
Acceptance bands of the extremes experiments.

The limit theorems carry no finite-n rates, so every band is a tunable
threshold. Reports always carry the raw statistics next to the flags.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field


class AcceptanceBands(BaseModel):
    """
    Thresholds for the pass/fail flags.

    Attributes:
        ks_max (float): Largest accepted KS distance to the Gumbel law
        dispersion_lo (float): Lower dispersion-index bound
        dispersion_hi (float): Upper dispersion-index bound
        correlation_max (float): Largest accepted |cell-count correlation|
        limit_mean_tol (float): Largest accepted |mean count - e^{-delta}|
        se_multiple (float): Standard errors allowed against exact oracles
    """

    model_config = ConfigDict(frozen=True)

    ks_max: float = Field(default=0.10, gt=0)
    dispersion_lo: float = 0.85
    dispersion_hi: float = 1.15
    correlation_max: float = Field(default=0.05, ge=0)
    limit_mean_tol: float = Field(default=0.15, ge=0)
    se_multiple: float = Field(default=3.0, gt=0)


DEFAULT_BANDS = AcceptanceBands()
