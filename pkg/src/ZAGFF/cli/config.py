"""
Experiment configuration of the command line runner.

Values come from an optional JSON file (`--config`) overridden by explicit
flags, and are validated before any computation. The resolved configuration
is written to `config.json` in the output directory.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, model_validator

from ..core.exceptions import ValidationError

SCHEMA_VERSION = "1.0"

Command = Literal["greens", "verify", "extremes", "sample"]


class ExperimentConfig(BaseModel):
    """
    Parameters of one CLI invocation.

    Attributes:
        command (str): greens | verify | extremes | sample
        d (int): Dimension (default 3)
        n (Optional[int]): Side length (greens, extremes, sample)
        n_list (Optional[list[int]]): Side lengths of the convergence report (greens)
        replicates (int): Monte Carlo replicates M (extremes, default 2000)
        mc_replicates (int): Walks for the exit-time check (verify, default 20000)
        seed (int): Master seed (default 0)
        delta (float): Exceedance level (extremes, default 0)
        floor (float): Point-pattern floor (default -10)
        split (Optional[list[int]]): Cells per axis (extremes, default halves along axis 1)
        laplace_c (float): Height of the Laplace indicator test function (default 1)
        beta (float): Bulk exponent in (1/2, 1) (default 0.75)
        count (int): Fields to write (sample, default 1)
        format (str): binary | csv (sample)
        inject_fault (bool): Perturb G(0, 0) by 1e-3 before the verify checks
        report_only (bool): Exit 0 even when acceptance flags fail
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    command: Command
    d: int = 3
    n: Optional[int] = None
    n_list: Optional[list[int]] = None
    replicates: int = Field(default=2000, ge=100)
    mc_replicates: int = Field(default=20000, ge=100)
    seed: int = Field(default=0, ge=0, le=(1 << 64) - 1)
    delta: float = 0.0
    floor: float = -10.0
    split: Optional[list[int]] = None
    laplace_c: float = Field(default=1.0, ge=0.0)
    beta: float = Field(default=0.75, gt=0.5, lt=1.0)
    count: int = Field(default=1, ge=1)
    format: Literal["binary", "csv"] = "binary"
    inject_fault: bool = False
    report_only: bool = False

    @model_validator(mode="after")
    def _check_command_fields(self) -> "ExperimentConfig":
        if self.command in ("extremes", "sample") and self.n is None:
            raise ValueError(f"`{self.command}` needs --n")
        if self.command == "greens" and self.n is None and not self.n_list:
            raise ValueError("`greens` needs --n or --n-list")
        if self.command == "extremes" and self.delta < self.floor:
            raise ValueError("delta must not lie below the pattern floor")
        return self

    def resolved_n_list(self) -> list[int]:
        """Side lengths of a greens run, increasing."""
        values = set(self.n_list or [])
        if self.n is not None:
            values.add(self.n)
        return sorted(values)

    def canonical_json(self) -> str:
        """Stable JSON of the resolved config with its schema version."""
        payload = {"schema_version": SCHEMA_VERSION, **self.model_dump(mode="json")}
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def digest(self, length: int = 12) -> str:
        """sha256 prefix of the canonical JSON, used to name default output directories."""
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()[:length]


def load_config_file(path: Optional[Path]) -> dict[str, Any]:
    """
    Read a JSON config file into a dict (empty when path is None).

    Raises:
        ValidationError: If the file is missing or not a JSON object
    """
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError(f"Cannot read config file: {path}", details={"path": str(path), "error": str(e)})
    if not isinstance(data, dict):
        raise ValidationError("Config file must hold a JSON object", details={"path": str(path)})
    return data


def build_config(command: str, file_values: dict[str, Any], flag_values: dict[str, Any]) -> ExperimentConfig:
    """
    Merge file values and flags (flags win) into a validated config.

    Raises:
        ValidationError: On any invalid or unknown parameter
    """
    merged = {**file_values, **{k: v for k, v in flag_values.items() if v is not None}}
    merged["command"] = command
    try:
        return ExperimentConfig(**merged)
    except PydanticValidationError as e:
        raise ValidationError(
            "Invalid experiment configuration",
            details={"errors": [{"loc": list(err["loc"]), "msg": err["msg"]} for err in e.errors()]},
        )
