"""Report and table output for the scenario runner.

Reports are a one-line timestamp header followed by a sorted-key JSON
document, so two runs of the same scenario differ only in the header.
Tables are plain comma-separated files with a single header row.
"""

from __future__ import annotations

import csv
import json
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, (np.integer, int, bool)) or value is None:
        return int(value) if isinstance(value, np.integer) else value
    return str(value)


def write_report(path: Path | str, title: str, payload: dict) -> Path:
    """Write a timestamped, deterministic-body report document."""
    path = Path(path)
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    body = json.dumps(_jsonable(payload), indent=2, sort_keys=True)
    path.write_text(f"# {title} generated {stamp}\n{body}\n")
    return path


def write_table(
    path: Path | str,
    header: Sequence[str],
    rows: Iterable[Sequence],
) -> Path:
    """Write a comma-separated table with a one-line header."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_format_cell(c) for c in row])
    return path


def _format_cell(cell):
    if isinstance(cell, (float, np.floating)):
        return repr(float(cell))
    if isinstance(cell, (int, np.integer)):
        return int(cell)
    return cell
