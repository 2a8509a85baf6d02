"""
Per-invocation output directory.

Each run writes `config.json` (resolved config), `report.json` and CSV tables
into a fresh directory; a directory whose `config.json` matches is rewritten
in place. JSON uses sorted keys and shortest round-trip
floats, CSV uses 17 significant digits, so equal inputs give equal bytes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd

from ..core.exceptions import ExportError, ValidationError
from ..core.logging_config import get_logger
from .config import SCHEMA_VERSION, ExperimentConfig

logger = get_logger(__name__)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Not JSON serialisable: {type(value).__name__}")


def dumps(payload: Any) -> str:
    """Stable JSON text (sorted keys, 2-space indent, trailing newline)."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False, default=_json_default) + "\n"


class RunDirectory:
    """
    Output directory of one invocation.

    Attributes:
        path (Path): Directory, fresh or holding a previous run of the same config
    """

    def __init__(self, config: ExperimentConfig, path: Optional[Path] = None):
        self.path = Path(path) if path is not None else Path("runs") / f"{config.command}-{config.digest()}"
        manifest = config.canonical_json()
        if self.path.exists() and any(self.path.iterdir()):
            previous = self.path / "config.json"
            if not (previous.is_file() and previous.read_text(encoding="utf-8") == manifest):
                raise ValidationError(
                    f"Output directory is not empty: {self.path}; pass --out for a fresh directory",
                    details={"path": str(self.path)},
                )
            # Same resolved config: the rerun rewrites the same files
            logger.info("Rerunning an identical configuration in %s", self.path)
        try:
            self.path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ExportError(f"Cannot create output directory: {self.path}", details={"error": str(e)})
        self.write_text("config.json", manifest)
        logger.info("Writing %s outputs to %s", config.command, self.path)

    def file(self, name: str) -> Path:
        return self.path / name

    def write_text(self, name: str, text: str) -> Path:
        target = self.file(name)
        try:
            target.write_text(text, encoding="utf-8")
        except OSError as e:
            raise ExportError(f"Failed to write {target}", details={"path": str(target), "error": str(e)})
        return target

    def write_report(self, command: str, body: dict[str, Any]) -> Path:
        """report.json with schema_version and command."""
        payload = {"schema_version": SCHEMA_VERSION, "command": command, **body}
        return self.write_text("report.json", dumps(payload))

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        target = self.file(name)
        try:
            frame.to_csv(target, index=False, float_format="%.17g")
        except OSError as e:
            raise ExportError(f"Failed to write {target}", details={"path": str(target), "error": str(e)})
        return target
