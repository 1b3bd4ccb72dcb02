"""CSV/JSON report writers with byte-stable output."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import Iterable, Sequence


def format_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if hasattr(v, "item"):  # numpy scalars
        return _json_value(v.item())
    return v


def render(rows: Iterable[dict], columns: Sequence[str], fmt: str) -> str:
    rows = list(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([format_cell(r[c]) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        payload = [{c: _json_value(r[c]) for c in columns} for r in rows]
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(rows: Iterable[dict], columns: Sequence[str], fmt: str, path: str = "-") -> None:
    text = render(rows, columns, fmt)
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
