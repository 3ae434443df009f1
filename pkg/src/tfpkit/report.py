"""Serialize a :class:`~tfpkit.pipeline.PipelineReport` as JSON, CSV or text.

All three renderings are deterministic: key order follows the report,
floats are written with ``repr`` (JSON, CSV) or four decimals (text).
"""

from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

from .errors import ValidationError

FORMATS = ("text", "csv", "json")
_TITLES = {
    "config": "Configuration",
    "data": "Data summary",
    "unit_root": "Unit-root tests",
    "estimation": "Production function estimates",
    "diagnostics": "Residual diagnostics",
    "cointegration": "Residual stationarity (cointegration)",
    "tfp": "TFP growth (Solow residual)",
    "decomposition": "Growth accounting",
    "warnings": "Warnings",
    "undefined": "Undefined values",
}


def _as_dict(report) -> dict:
    return report if isinstance(report, dict) else report.to_dict()


# --- JSON --------------------------------------------------------------------

def to_json(report) -> str:
    return json.dumps(_as_dict(report), indent=2, allow_nan=False) + "\n"


# --- text --------------------------------------------------------------------

def format_number(x) -> str:
    """Scalar as printed in text tables (4 decimals, no negative zero)."""
    if x is None:
        return "NA"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        s = f"{x:.4f}"
        return "0.0000" if s == "-0.0000" else s
    if isinstance(x, (list, tuple)):
        return ", ".join(format_number(v) for v in x)
    return str(x)


def _is_scalar(v) -> bool:
    return not isinstance(v, dict) and not (
        isinstance(v, list) and v and all(isinstance(r, dict) for r in v))


def _flat_row(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if isinstance(v, dict):
            prefix = "cv" if k == "critical_values" else k
            out.update({f"{prefix}_{sub}": x for sub, x in v.items()})
        else:
            out[k] = v
    return out


def _table(rows: list[dict], indent: str) -> list[str]:
    rows = [_flat_row(r) for r in rows]
    cols = list(rows[0])
    cells = [[format_number(r.get(c)) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    line = lambda vals: indent + "  ".join(v.rjust(w) for v, w in zip(vals, widths)).rstrip()
    out = [line(cols), indent + "  ".join("-" * w for w in widths)]
    out.extend(line(row) for row in cells)
    return out


def _render(obj: dict, indent: str = "") -> list[str]:
    lines: list[str] = []
    scalars = [(k, v) for k, v in obj.items() if _is_scalar(v)]
    width = max((len(k) for k, _ in scalars), default=0)
    for key, value in obj.items():
        if _is_scalar(value):
            lines.append(f"{indent}{key.ljust(width)}  {format_number(value)}".rstrip())
        elif isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_render(value, indent + "  ") if value else [f"{indent}  (empty)"])
        else:
            lines.append(f"{indent}{key}:")
            lines.extend(_table(value, indent + "  "))
    return lines


def to_text(report) -> str:
    data = _as_dict(report)
    blocks = []
    for name, value in data.items():
        if name == "schema_version":
            continue
        title = _TITLES.get(name, name)
        body: list[str]
        if name == "warnings":
            body = [f"  [{w['code']}] {w['message']}" for w in value] or ["  (none)"]
        elif name == "undefined":
            body = [f"  {k}: {v}" for k, v in value.items()] or ["  (none)"]
        else:
            body = _render(value, "  ")
        blocks.append("\n".join([title, "=" * len(title), *body]))
    return "\n\n".join(blocks) + "\n"


# --- CSV ---------------------------------------------------------------------

def _flatten(obj, prefix: str, out: list) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(v, f"{prefix}.{k}" if prefix else k, out)
    elif isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            _flatten(v, f"{prefix}.{i}", out)
    else:
        out.append((prefix, obj))


def _csv_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return ";".join(_csv_value(x) for x in v)
    return str(v)


def section_csv(name: str, value) -> str:
    """One section as a two-column ``field,value`` table."""
    rows: list = []
    if name == "warnings":
        rows = [(f"{i}.{w['code']}", w["message"]) for i, w in enumerate(value)]
    else:
        _flatten(value, "", rows)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["field", "value"])
    for key, v in rows:
        w.writerow([key, _csv_value(v)])
    return buf.getvalue()


def to_csv_files(report) -> dict[str, str]:
    data = _as_dict(report)
    return {f"{name}.csv": section_csv(name, value)
            for name, value in data.items() if name != "schema_version"}


# --- dispatch ----------------------------------------------------------------

def render(report, format: str = "text") -> str:
    """Single-string rendering (CSV sections are concatenated under ``# name`` lines)."""
    if format == "json":
        return to_json(report)
    if format == "text":
        return to_text(report)
    if format == "csv":
        return "\n".join(f"# {name}\n{body}" for name, body in to_csv_files(report).items())
    raise ValidationError(f"format must be one of {FORMATS}")


def emit_report(report, format: str = "text", path: str | os.PathLike | None = None) -> str | None:
    """Write ``report`` to ``path`` (a directory for CSV) or return it as a string.

    Raises :class:`ValidationError` when the destination cannot be written.
    """
    if format not in FORMATS:
        raise ValidationError(f"format must be one of {FORMATS}")
    if path is None:
        return render(report, format)
    try:
        if format == "csv":
            target = Path(path)
            target.mkdir(parents=True, exist_ok=True)
            for fname, body in to_csv_files(report).items():
                with open(target / fname, "w", newline="", encoding="utf-8") as fh:
                    fh.write(body)
        else:
            with open(path, "w", newline="", encoding="utf-8") as fh:
                fh.write(render(report, format))
    except OSError as exc:
        raise ValidationError(f"cannot write report to {path}: {exc.strerror or exc}") from exc
    return None
