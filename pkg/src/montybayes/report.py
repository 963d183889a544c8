"""Report envelopes and their JSON / CSV / table renderings.

Canonical JSON never holds an exact rational as a float: exact values are
``{"value": "p/q", "decimal": "...", "provenance": "exact"}``.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from . import __version__
from .core import decimal_str, dollars, fraction_str

SCHEMA = "montybayes.report/1"
PROVENANCES = ("closed_form", "exact", "simulated")


class UnknownFormat(ValueError):
    pass


def q(x: Fraction, provenance: str) -> dict:
    """An exact rational tagged with where it came from."""
    assert provenance in PROVENANCES
    return {"value": fraction_str(x), "decimal": decimal_str(x), "provenance": provenance}


def money(cents: Fraction | int, provenance: str) -> dict:
    cents = Fraction(cents)
    return {
        "value": fraction_str(cents),
        "unit": "cents",
        "decimal": decimal_str(cents / 100, 2),
        "display": dollars(cents),
        "provenance": provenance,
    }


def sim(value: float, provenance: str = "simulated", **extra) -> dict:
    return {"value": value, "provenance": provenance, **extra}


def envelope(command: str, digest: str, results: dict) -> dict:
    return {
        "schema": SCHEMA,
        "tool_version": __version__,
        "command": command,
        "config_digest": digest,
        "results": results,
    }


def to_json(env: dict) -> str:
    return json.dumps(env, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell_text(v) -> str:
    if isinstance(v, dict) and "provenance" in v:
        if "display" in v:
            return v["display"]
        if isinstance(v["value"], str):
            x = Fraction(v["value"])
            return str(x.numerator) if x.denominator == 1 else f'{v["value"]} ({decimal_str(x, 4)})'
        return f'{v["value"]:.6g}'
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _csv_value(v) -> str:
    if isinstance(v, dict) and "provenance" in v:
        return str(v["value"])
    if v is None:
        return ""
    return str(v)


def _tables(env: dict) -> list[tuple[str, list[dict]]]:
    res = env.get("results", {})
    return [(k, v) for k, v in res.items() if isinstance(v, list) and all(isinstance(r, dict) for r in v)]


def _header(rows: list[dict]) -> list[str]:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def render_table(env: dict) -> str:
    out = [f'{env["command"]}  (tool {env["tool_version"]}, config {env["config_digest"]})']
    for k, v in sorted(env.get("results", {}).items()):
        if not isinstance(v, list):
            out.append(f"{k}: {_cell_text(v)}")
    for name, rows in _tables(env):
        out.append("")
        out.append(f"[{name}]")
        if not rows:
            out.append("(no rows)")
            continue
        cols = _header(rows)
        grid = [cols] + [[_cell_text(r.get(c)) for c in cols] for r in rows]
        widths = [max(len(row[i]) for row in grid) for i in range(len(cols))]
        for row in grid:
            out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(out) + "\n"


def render_csv(env: dict) -> str:
    """The envelope's ``rows`` table (or its first table) as CSV: one header line plus one line per row."""
    tables = dict(_tables(env))
    rows = tables.get("rows")
    if rows is None:
        rows = next(iter(tables.values()), [])
    buf = io.StringIO()
    cols = _header(rows) if rows else list(env.get("results", {}).get("columns", []))
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        writer.writerow([_csv_value(r.get(c)) for c in cols])
    return buf.getvalue()


def render(env: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(env)
    if fmt == "csv":
        return render_csv(env)
    if fmt == "table":
        return render_table(env)
    raise UnknownFormat(f"unknown format {fmt!r}; use json, csv or table")
