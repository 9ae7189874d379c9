"""Report serialisation: canonical JSON and one-row-per-k CSV."""
from __future__ import annotations

import csv
import io
import json


def emit(report: dict, fmt="json") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        table = report.get("table") or []
        if not table:
            return ""
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(table[0]), lineterminator="\n")
        writer.writeheader()
        for row in table:
            writer.writerow(row)
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def overall(statuses):
    """Combine per-check statuses: any fail wins, then inconclusive."""
    statuses = list(statuses)
    if "fail" in statuses:
        return "fail"
    if "inconclusive" in statuses:
        return "inconclusive"
    return "pass"


EXIT_CODES = {"pass": 0, "fail": 1, "inconclusive": 2}
