"""
Centralized configuration management using Pydantic.

This module defines the Settings class which loads and validates toolkit
configuration from environment variables (prefix ``ZAGFF_``) or a .env file.

Module Input:
    - Environment variables from OS (e.g. ZAGFF_THREADS)
    - .env file in project root (optional)
    - Default values defined in class

Module Output:
    - Validated configuration object (singleton)
    - Helper for the effective replicate worker count
"""

from __future__ import annotations

from pathlib import Path

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import ValidationError


class Settings(BaseSettings):
    """
    Toolkit settings loaded from environment variables and .env file.

    Attributes:
        Execution:
            threads (int): Replicate worker cap (env ZAGFF_THREADS, default 1)
            walk_step_cap (int): Step budget of a single simulated walk
            walk_block_size (int): Walks advanced together per RNG block

        Numerical limits:
            golden_green_d3 (float): Frozen g_{Z^3}(0,0)
            quadrature_tol (float): Level-to-level stopping tolerance
            quadrature_max_levels (int): Dyadic refinement depth cap
            dense_max_sites (int): Largest region handled by dense solves
            oracle_max_sites (int): Largest torus for the dense sampler oracle
            max_field_sites (int): Largest admissible N = n^d

        Extremes:
            pattern_floor (float): Default storage floor of point patterns
            bulk_beta (float): Exponent of the bulk region R_n

        Logging Configuration:
            log_level (str): Minimum log level (default: "INFO")
            log_dir (Path): Directory for log files (default: "logs")
            log_file (str): Log file name (default: "zagff.log")
            log_to_file (bool): Attach a rotating file handler
    """

    # ---------------- Execution ----------------
    threads: int = 1
    walk_step_cap: int = 100_000_000
    walk_block_size: int = 4096

    # ---------------- Numerical limits ----------------
    golden_green_d3: float = 1.5163861
    quadrature_tol: float = 1e-7
    quadrature_max_levels: int = 60
    dense_max_sites: int = 10_000
    oracle_max_sites: int = 512
    max_field_sites: int = 2**26

    # ---------------- Extremes ----------------
    pattern_floor: float = -10.0
    bulk_beta: float = 0.75

    # ---------------- Logging ----------------
    log_level: str = "INFO"
    log_dir: Path = Path("logs")
    log_file: str = "zagff.log"
    log_to_file: bool = False

    # ---------------- Pydantic Settings ----------------
    model_config = SettingsConfigDict(
        env_prefix="ZAGFF_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("threads")
    @classmethod
    def _positive_threads(cls, value: int) -> int:
        if value < 1:
            raise ValidationError(
                f"ZAGFF_THREADS must be >= 1, got {value}",
                details={"threads": value},
            )
        return value

    def worker_count(self, requested: int | None = None) -> int:
        """
        Effective number of replicate workers.

        Args:
            requested (int | None): Caller override, capped by `threads`

        Returns:
            int: Worker count in [1, threads]
        """
        if requested is None:
            return self.threads
        return max(1, min(requested, self.threads))


# Singleton instance shared across the toolkit
settings = Settings()
