"""Serialization of results: JSON envelopes, CSV tables and TSV plot files."""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import os
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .jacobi import NchoParams, SectorId

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "NCHO_OUTPUT_DIR"
PLOT_COLUMNS = ("alpha", "beta", "n", "lower", "upper", "midpoint")


def to_jsonable(obj: Any) -> Any:
    """Convert result objects into plain JSON types (floats keep full precision)."""
    if isinstance(obj, SectorId):
        return str(obj)
    if isinstance(obj, NchoParams):
        return {"alpha": obj.alpha, "beta": obj.beta}
    if isinstance(obj, enum.Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return obj


def timestamp() -> str:
    # SOURCE_DATE_EPOCH pins the stamp for reproducible output
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = float(epoch) if epoch else time.time()
    return datetime.fromtimestamp(t, tz=timezone.utc).isoformat(timespec="seconds")


def envelope(command: str, config: dict, payload: Any, warnings: Sequence[str] = ()) -> dict:
    from . import __version__

    return {
        "tool": "ncho",
        "version": __version__,
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": to_jsonable(config),
        "timestamp": timestamp(),
        "payload": to_jsonable(payload),
        "warnings": list(warnings),
    }


def dumps_json(doc: Any) -> str:
    # repr-based float output is the shortest string that round-trips exactly
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def fmt_real(x: float) -> str:
    return repr(float(x))


def rows_to_csv(rows: Iterable[dict], delimiter: str = ",") -> str:
    rows = list(rows)
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), delimiter=delimiter, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: fmt_real(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


def read_csv(text: str, delimiter: str = ",") -> list[dict]:
    return list(csv.DictReader(io.StringIO(text), delimiter=delimiter))


def resolve_output(path: str | os.PathLike) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def plot_rows(points) -> list[dict]:
    return [
        {"alpha": pt.params.alpha, "beta": pt.params.beta, "n": pt.enclosure.n,
         "lower": pt.enclosure.lower, "upper": pt.enclosure.upper, "midpoint": pt.enclosure.mid}
        for pt in points
    ]


def emit_plot_data(points, path: str | os.PathLike) -> Path:
    """Write curve points as a tab-separated file, one row per point in grid order.

    Raises ValueError for an empty point list (nothing is written) and
    OSError when the file cannot be written.
    """
    points = list(points)
    if not points:
        raise ValueError("no certified points to write")
    out = resolve_output(path)
    out.write_text(rows_to_csv(plot_rows(points), delimiter="\t"))
    return out
