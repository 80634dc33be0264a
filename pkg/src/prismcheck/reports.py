"""Report envelopes and the JSON / CSV / Markdown emitters.

Emitters are pure functions of the report dictionary: key order is fixed
by construction and JSON is written with ``sort_keys``, so equal inputs
give byte-identical text.
"""

from __future__ import annotations

import csv
import io
import json
from importlib import resources

__all__ = [
    "SCHEMA_VERSION",
    "load_schema",
    "verify_envelope",
    "bounds_envelope",
    "herbrand_envelope",
    "emit",
]

SCHEMA_VERSION = "1"
FORMATS = ("json", "csv", "md")


def load_schema(kind: str) -> dict:
    """The shipped JSON schema for ``verify``, ``bounds`` or ``herbrand`` reports."""
    text = resources.files("prismcheck").joinpath("schemas", f"{kind}.schema.json").read_text()
    return json.loads(text)


def verify_envelope(suite: str, seed: int, config: dict, cells: list) -> dict:
    failures = [c for c in cells if c.get("verdict") != "pass"]
    return {
        "report": "verify",
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "seed": seed,
        "config": config,
        "passed": not failures,
        "summary": {"cells": len(cells), "failed": len(failures)},
        "cells": cells,
    }


def bounds_envelope(p: int, e: int, i: int, rows: list, field: dict | None = None,
                    checks: dict | None = None) -> dict:
    out = {
        "report": "bounds",
        "schema_version": SCHEMA_VERSION,
        "p": p,
        "e": e,
        "i": i,
        "field": field,
        "rows": rows,
        "passed": True if checks is None else checks["passed"],
    }
    if checks is not None:
        out["checks"] = checks
    return out


def herbrand_envelope(data: dict) -> dict:
    return {"report": "herbrand", "schema_version": SCHEMA_VERSION, "passed": True, **data}


def emit(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return _to_csv(report)
    if fmt == "md":
        return _to_md(report)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _table(report: dict) -> tuple:
    """(header, rows) of a report's tabular part, cells flattened to text."""
    kind = report["report"]
    if kind == "bounds":
        header = ["method", "applicable", "value_exact", "log_term", "value_float", "reason"]
        rows = []
        for r in report["rows"]:
            log = r["log_term"]
            rows.append([r["method"], "yes" if r["applicable"] else "no",
                         r["value_exact"] or "", _log_text(log), _float_text(r["value_float"]),
                         r["reason"]])
        return header, rows
    if kind == "herbrand":
        header = ["function", "points", "slopes"]
        rows = [[name, " ".join(f"({x},{y})" for x, y in report[name]["points"]),
                 " ".join(report[name]["slopes"])] for name in ("phi", "psi")]
        return header, rows
    header = ["cell", "verdict", "params", "detail"]
    rows = []
    for k, c in enumerate(report["cells"]):
        params = c.get("params", {})
        detail = {key: val for key, val in c.items() if key not in ("params", "verdict")}
        rows.append([str(k), c.get("verdict", ""), json.dumps(params, sort_keys=True),
                     json.dumps(detail, sort_keys=True)])
    return header, rows


def _log_text(log) -> str:
    if not log:
        return ""
    return f"{log['coeff']}*log_{log['base']}({log['arg']})"


def _float_text(x) -> str:
    return "" if x is None else f"{x:.6f}"


def _preamble(report: dict) -> list:
    kind = report["report"]
    if kind == "bounds":
        lines = [f"p={report['p']} e={report['e']} i={report['i']}"]
        if report.get("field"):
            f = report["field"]
            lines.append(f"field={f['name']} c0={f['c0']} s0={f['s0']}")
        return lines
    if kind == "herbrand":
        return [f"lambda={report['lambda']} mu={report['mu']} c0={report['c0']}"]
    return [f"suite={report['suite']} seed={report['seed']} passed={report['passed']}"]


def _to_csv(report: dict) -> str:
    header, rows = _table(report)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for line in _preamble(report):
        writer.writerow([f"# {line}"])
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _to_md(report: dict) -> str:
    header, rows = _table(report)
    cells = [header] + rows
    widths = [max(len(str(r[k])) for r in cells) for k in range(len(header))]

    def line(r):
        return "| " + " | ".join(str(v).ljust(w) for v, w in zip(r, widths)) + " |"

    out = [f"<!-- {p} -->" for p in _preamble(report)]
    out.append(line(header))
    out.append("| " + " | ".join("-" * w for w in widths) + " |")
    out.extend(line(r) for r in rows)
    return "\n".join(out) + "\n"
