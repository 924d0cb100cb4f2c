"""Output records shared by every CLI command, with JSON and CSV encoders.

Complex numbers are always written as an explicit {"re": ..., "im": ...}
pair in JSON and as a ``<name>_re``, ``<name>_im`` column pair in CSV.
Floats are printed with repr, which round-trips to the last bit.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = "1"

__all__ = ["SCHEMA_VERSION", "OutputRecord", "to_json", "diagnostics_json", "parse_record", "to_csv"]


@dataclass
class OutputRecord:
    command: str
    inputs: dict[str, Any]
    results: list[dict[str, Any]] = field(default_factory=list)
    diagnostics: dict[str, Any] = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION


def _encode(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, dict):
        return {str(k): _encode(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if hasattr(v, "item") and callable(v.item):     # numpy scalars
        return _encode(v.item())
    return v


def _decode(v):
    if isinstance(v, dict):
        if set(v) == {"re", "im"}:
            return complex(v["re"], v["im"])
        return {k: _decode(x) for k, x in v.items()}
    if isinstance(v, list):
        return [_decode(x) for x in v]
    return v


def to_json(rec: OutputRecord) -> str:
    body = {
        "schema_version": rec.schema_version,
        "command": rec.command,
        "inputs": _encode(rec.inputs),
        "results": _encode(rec.results),
        "diagnostics": _encode(rec.diagnostics),
    }
    return json.dumps(body, indent=2, allow_nan=False) + "\n"


def diagnostics_json(rec: OutputRecord) -> str:
    """The diagnostics block alone, for CSV runs where the table has no room for it."""
    return json.dumps(_encode(rec.diagnostics), indent=2, allow_nan=False) + "\n"


def parse_record(text: str) -> OutputRecord:
    body = json.loads(text)
    version = body.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {version!r}")
    return OutputRecord(
        command=body["command"],
        inputs=_decode(body["inputs"]),
        results=_decode(body["results"]),
        diagnostics=_decode(body["diagnostics"]),
        schema_version=version,
    )


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ValueError("non-finite value in output")
        return repr(v)
    return str(v)


def to_csv(rec: OutputRecord) -> str:
    """Results table only; complex columns are split into _re/_im pairs."""
    columns: list[str] = []
    rows = []
    for row in rec.results:
        flat = {}
        for k, v in row.items():
            v = _encode(v)
            if isinstance(v, dict) and set(v) == {"re", "im"}:
                flat[f"{k}_re"], flat[f"{k}_im"] = v["re"], v["im"]
            else:
                flat[k] = v
        for k in flat:
            if k not in columns:
                columns.append(k)
        rows.append(flat)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for flat in rows:
        w.writerow([_cell(flat.get(c)) for c in columns])
    return buf.getvalue()
