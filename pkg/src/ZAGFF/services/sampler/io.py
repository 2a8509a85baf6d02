"""
Field export and import.

Binary layout (little endian):

    magic  8 bytes  b"ZAGFFLD1"
    d      uint64
    n      uint64
    seed   uint64
    values N float64, row-major site order

CSV layout: columns x_1..x_d, value, one row per site in row-major order,
values written with 17 significant digits. Both formats round-trip exactly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pandas as pd

from ...core.exceptions import ExportError, ZAGFFError
from ...core.logging_config import get_logger
from ..lattice import FieldConfig, all_sites
from .spectral import TorusField

logger = get_logger(__name__)

FIELD_MAGIC = b"ZAGFFLD1"
HEADER_DTYPE = np.dtype([("magic", "S8"), ("d", "<u8"), ("n", "<u8"), ("seed", "<u8")])


def write_field_binary(field: TorusField, path: Path) -> Path:
    """
    Write a field in the binary layout.

    Raises:
        ExportError: On I/O failure
    """
    header = np.array([(FIELD_MAGIC, field.cfg.d, field.cfg.n, field.seed)], dtype=HEADER_DTYPE)
    try:
        with open(path, "wb") as fh:
            fh.write(header.tobytes())
            fh.write(np.ascontiguousarray(field.flat, dtype="<f8").tobytes())
    except OSError as e:
        raise ExportError(f"Failed to write field: {path}", details={"path": str(path), "error": str(e)})
    logger.debug("Wrote binary field (N=%d) to %s", field.cfg.N, path)
    return Path(path)


def read_field_binary(path: Path) -> TorusField:
    """
    Read a field written by `write_field_binary`.

    Raises:
        ExportError: On I/O failure, bad magic, or a truncated payload
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise ExportError(f"Failed to read field: {path}", details={"path": str(path), "error": str(e)})
    if len(raw) < HEADER_DTYPE.itemsize:
        raise ExportError("Field file shorter than its header", details={"path": str(path), "bytes": len(raw)})

    header = np.frombuffer(raw, dtype=HEADER_DTYPE, count=1)[0]
    if bytes(header["magic"]) != FIELD_MAGIC:
        raise ExportError("Bad field file magic", details={"path": str(path), "magic": repr(bytes(header["magic"]))})
    try:
        cfg = FieldConfig(d=int(header["d"]), n=int(header["n"]))
    except ZAGFFError as e:
        raise ExportError("Invalid field geometry in header", details={"path": str(path), "error": e.message})

    payload = raw[HEADER_DTYPE.itemsize:]
    if len(payload) != 8 * cfg.N:
        raise ExportError(
            "Field payload size does not match the header",
            details={"path": str(path), "expected_bytes": 8 * cfg.N, "bytes": len(payload)},
        )
    values = np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(cfg.shape)
    values.setflags(write=False)
    return TorusField(cfg=cfg, values=values, seed=int(header["seed"]))


def field_frame(field: TorusField) -> pd.DataFrame:
    """Field as rows (x_1, ..., x_d, value)."""
    frame = pd.DataFrame(all_sites(field.cfg), columns=[f"x_{j + 1}" for j in range(field.cfg.d)])
    frame["value"] = field.flat
    return frame


def write_field_csv(field: TorusField, path: Path) -> Path:
    """
    Write a field as CSV.

    Raises:
        ExportError: On I/O failure
    """
    try:
        field_frame(field).to_csv(path, index=False, float_format="%.17g")
    except OSError as e:
        raise ExportError(f"Failed to write field CSV: {path}", details={"path": str(path), "error": str(e)})
    return Path(path)


def read_field_csv(path: Path, seed: int = 0) -> TorusField:
    """
    Read a field CSV; d comes from the coordinate columns, n from the row count.

    The CSV carries no seed; `seed` is attached to the returned field.

    Raises:
        ExportError: On I/O failure, missing columns, or rows out of site order
    """
    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ExportError(f"Failed to read field CSV: {path}", details={"path": str(path), "error": str(e)})

    coords = [c for c in frame.columns if c.startswith("x_")]
    d = len(coords)
    if "value" not in frame.columns or d == 0 or coords != [f"x_{j + 1}" for j in range(d)]:
        raise ExportError("Field CSV needs columns x_1..x_d, value", details={"columns": list(frame.columns)})

    n = int(round(len(frame) ** (1.0 / d)))
    if n ** d != len(frame):
        raise ExportError("Row count is not a perfect d-th power", details={"rows": len(frame), "d": d})
    try:
        cfg = FieldConfig(d=d, n=n)
    except ZAGFFError as e:
        raise ExportError("Invalid field geometry in CSV", details={"path": str(path), "error": e.message})
    if not np.array_equal(frame[coords].to_numpy(dtype=np.int64), all_sites(cfg)):
        raise ExportError("Field CSV rows are not in row-major site order", details={"path": str(path)})

    values = frame["value"].to_numpy(dtype=np.float64).reshape(cfg.shape)
    values.setflags(write=False)
    return TorusField(cfg=cfg, values=values, seed=int(seed))
