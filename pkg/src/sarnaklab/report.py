"""Deterministic JSON/CSV serialization of results.

Floats are written with 12 significant digits and JSON keys are sorted,
so serializing the same results twice gives identical bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, is_dataclass

import numpy as np

from .criterion import CriterionReport
from .empirics import BlockDistribution, Weighting

CSV_COLUMNS = ["g", "m", "epsilon_total", "entropy_gap", "pinsker_lower", "pinsker_upper", "n_effective"]
SIG_DIGITS = 12


def fmt_float(x: float) -> str:
    return format(float(x), f".{SIG_DIGITS}g")


def _round(x: float) -> float | str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(fmt_float(x))


def to_plain(obj):
    """Convert results into JSON-ready values with rounded floats."""
    if isinstance(obj, CriterionReport):
        return report_to_dict(obj)
    if isinstance(obj, BlockDistribution):
        return to_plain(obj.to_dict())
    if isinstance(obj, Weighting):
        return obj.kind
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _round(obj.real), "im": _round(obj.imag)}
    return obj


def report_to_dict(report: CriterionReport) -> dict:
    return {
        "gaps": list(report.gaps),
        "m_max": report.m_max,
        "eps": report.eps,
        "weighting": report.weighting.kind,
        "n": report.window_length,
        "rows": [to_plain(asdict(r)) for r in report.rows],
        "sup_totals": {str(g): v for g, v in report.sup_totals.items()},
        "certified_gaps": report.certified_gaps,
        "warnings": list(report.warnings),
    }


def _rows_csv(rows, meta: dict | None) -> bytes:
    buf = io.StringIO()
    if meta:
        buf.write("# " + json.dumps(meta, sort_keys=True, default=str) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.g, r.m, fmt_float(r.epsilon_total), fmt_float(r.entropy_gap),
                         fmt_float(r.pinsker_lower), fmt_float(r.pinsker_upper), r.n_effective])
    return buf.getvalue().encode()


def _bundle_csv(bundle: dict, meta: dict | None) -> bytes:
    buf = io.StringIO()
    if meta:
        buf.write("# " + json.dumps(meta, sort_keys=True, default=str) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])

    def walk(prefix, value):
        if isinstance(value, dict) and set(value) != {"re", "im"}:
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else str(k), value[k])
        else:
            writer.writerow([prefix, json.dumps(value, sort_keys=True)
                             if isinstance(value, (dict, list)) else value])

    walk("", to_plain(bundle))
    return buf.getvalue().encode()


def emit_report(results, fmt: str = "json", meta: dict | None = None) -> bytes:
    """Serialize a :class:`CriterionReport` or a metrics bundle (a dict).

    ``meta`` (tool version, config, ...) is embedded unrounded under
    ``"meta"`` in JSON and as a leading ``#`` comment line in CSV.
    """
    if fmt == "csv":
        if isinstance(results, CriterionReport):
            return _rows_csv(results.rows, meta)
        return _bundle_csv(results, meta)
    if fmt != "json":
        raise ValueError(f"unknown format {fmt!r}")
    body = {"results": to_plain(results)}
    if meta is not None:
        body["meta"] = meta
    return (json.dumps(body, sort_keys=True, indent=1) + "\n").encode()


def read_csv_rows(data: bytes) -> list[dict]:
    lines = [ln for ln in data.decode().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))
