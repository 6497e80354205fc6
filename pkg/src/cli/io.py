"""CSV ingestion and machine-readable output."""

import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
import structlog

from src.exceptions import MalformedInputError
from src.geometry.dataset import Dataset
from src.geometry.regions import RegionSpec
from src.utils.constants import OUTPUT_SCHEMA

logger = structlog.get_logger()

REQUIRED_COLUMNS = ("y", "r1", "r2")


def _numeric_column(frame: pd.DataFrame, column: str) -> np.ndarray:
    """Parse one column, naming the first bad cell by its 1-based data row."""
    raw = frame[column].str.strip()
    values = pd.to_numeric(raw, errors="coerce")
    bad = values.isna() | ~np.isfinite(values.fillna(0.0))
    if bad.any():
        position = int(np.flatnonzero(bad.to_numpy())[0])
        row = position + 1
        raise MalformedInputError(
            f"non-numeric value {frame[column].iloc[position]!r} "
            f"in column {column!r} at row {row}",
            row=row,
            column=column,
        )
    return values.to_numpy(dtype=float)


def read_dataset(path: Path, region: Optional[RegionSpec] = None) -> Dataset:
    """Read a headered CSV with columns y, r1, r2 and optionally d.

    Without a d column the treatment flags come from ``region``.
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except FileNotFoundError as e:
        raise MalformedInputError(f"input file not found: {path}") from e
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise MalformedInputError(f"cannot parse {path}: {e}") from e

    frame.columns = [str(c).strip() for c in frame.columns]
    for column in REQUIRED_COLUMNS:
        if column not in frame.columns:
            raise MalformedInputError(
                f"missing required column {column!r}", column=column
            )
    if frame.empty:
        raise MalformedInputError(f"{path} has no data rows")

    y = _numeric_column(frame, "y")
    r = np.column_stack([_numeric_column(frame, "r1"), _numeric_column(frame, "r2")])

    if "d" in frame.columns:
        d = _numeric_column(frame, "d")
        invalid = ~np.isin(d, (0.0, 1.0))
        if invalid.any():
            row = int(np.flatnonzero(invalid)[0]) + 1
            raise MalformedInputError(
                f"treatment flag must be 0 or 1 at row {row}", row=row, column="d"
            )
        data = Dataset(y=y, r=r, d=d.astype(bool))
    elif region is not None:
        data = Dataset.from_region(y, r, region)
    else:
        raise MalformedInputError(
            "input has no 'd' column; pass --region to derive treatment", column="d"
        )
    logger.info(
        "Loaded dataset", path=str(path), n=data.n, treated=int(data.d.sum())
    )
    return data


def _reason(value: float) -> str:
    if math.isnan(value):
        return "not a number"
    return "positive infinity" if value > 0 else "negative infinity"


def sanitize_record(record: Mapping[str, Any]) -> Dict[str, Any]:
    """Replace non-finite floats by None plus a ``<field>_reason`` entry."""
    clean: Dict[str, Any] = {}
    for key, value in record.items():
        if isinstance(value, (float, np.floating)):
            value = float(value)
            if not math.isfinite(value):
                clean[key] = None
                clean[f"{key}_reason"] = _reason(value)
                continue
        elif isinstance(value, np.integer):
            value = int(value)
        elif isinstance(value, np.bool_):
            value = bool(value)
        elif isinstance(value, Mapping):
            value = sanitize_record(value)
        clean[key] = value
    return clean


def _write(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(output).write_text(text)
        logger.info("Wrote output", path=str(output), bytes=len(text))


def render_json(payload: Mapping[str, Any]) -> str:
    body = {"schema": OUTPUT_SCHEMA, **sanitize_record(payload)}
    if "records" in payload:
        body["records"] = [sanitize_record(r) for r in payload["records"]]
    return json.dumps(body, indent=2, allow_nan=False) + "\n"


def render_csv(rows: Sequence[Mapping[str, Any]]) -> str:
    clean = [sanitize_record(r) for r in rows]
    flat = pd.json_normalize(clean, sep="_") if clean else pd.DataFrame()
    return str(flat.to_csv(index=False, lineterminator="\n"))


def emit(
    payload: Mapping[str, Any],
    fmt: str = "json",
    output: Optional[Path] = None,
) -> None:
    """Write a payload; CSV output carries only its ``records`` rows."""
    if fmt == "csv":
        rows: List[Mapping[str, Any]] = list(payload.get("records", [payload]))
        _write(render_csv(rows), output)
    else:
        _write(render_json(payload), output)
