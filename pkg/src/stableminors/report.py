"""Report assembly: JSON with a published schema, or plain tables.

Ideal generators are always emitted in reduced-Groebner canonical form so
that report diffs are stable across runs.
"""

from __future__ import annotations

import json

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "stableminors report",
    "type": "object",
    "required": ["tool", "version", "task", "status"],
    "properties": {
        "tool": {"const": "stableminors"},
        "version": {"type": "string"},
        "task": {"type": "string"},
        "status": {"enum": ["ok", "error"]},
        "ring": {
            "type": "object",
            "required": ["field", "variables"],
            "properties": {
                "field": {"type": "string"},
                "variables": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "prefixItems": [{"type": "string"}, {"type": "integer"}],
                    },
                },
                "relations": {"type": "array", "items": {"type": "string"}},
            },
        },
        "result": {"type": "object"},
        "error": {
            "type": "object",
            "required": ["code", "message"],
            "properties": {
                "code": {"type": "string"},
                "message": {"type": "string"},
            },
        },
    },
}

ERROR_CODES = {
    "parse": 2,
    "unsupported-field": 3,
    "window-too-short": 4,
    "not-applicable": 5,
    "internal": 1,
}


def ideal_strings(ideal):
    if ideal is None:
        return None
    gens = ideal.reduced_generators()
    return [str(g) for g in gens] if gens else ["0"]


def series_strings(series):
    return {str(i): ideal_strings(series[i]) for i in series.indices()}


def periodicity_payload(report):
    return {
        "status": report.status,
        "period": report.period,
        "onset": report.onset,
        "verified_repeats": report.verified_repeats,
        "window": list(report.window),
        "parity_ideals": [ideal_strings(i) for i in report.parity_ideals],
        "notes": list(report.notes),
    }


def ring_payload(ring):
    return {
        "field": ring.field.name,
        "variables": [[n, w] for n, w in zip(ring.names, ring.weights)],
        "relations": [str(r) for r in ring.relations],
    }


def make_report(task, ring=None, result=None, error=None):
    from . import __version__

    body = {
        "tool": "stableminors",
        "version": __version__,
        "task": task,
        "status": "error" if error else "ok",
    }
    if ring is not None:
        body["ring"] = ring_payload(ring)
    if error is not None:
        body["error"] = error
    else:
        body["result"] = result or {}
    return body


def emit(report, fmt="table", out=None):
    import sys

    out = out or sys.stdout
    if fmt == "json":
        json.dump(report, out, indent=2, sort_keys=True, default=str)
        out.write("\n")
        return
    _emit_table(report, out)


def _emit_table(report, out):
    w = out.write
    w(f"task: {report['task']}    status: {report['status']}\n")
    if "ring" in report:
        ring = report["ring"]
        vars_ = " ".join(f"{n}({wt})" for n, wt in ring["variables"])
        w(f"ring: {ring['field']}[{vars_}]")
        if ring.get("relations"):
            w(" / (" + ", ".join(ring["relations"]) + ")")
        w("\n")
    if report["status"] == "error":
        err = report["error"]
        w(f"error [{err['code']}]: {err['message']}\n")
        return
    _emit_value(report.get("result", {}), out, indent=0)


def _emit_value(value, out, indent):
    pad = "  " * indent
    if isinstance(value, dict):
        for k in value:
            v = value[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                out.write(f"{pad}{k}:\n")
                _emit_value(v, out, indent + 1)
            else:
                out.write(f"{pad}{k}: {_flat(v)}\n")
    elif isinstance(value, list):
        for v in value:
            out.write(f"{pad}- {_flat(v)}\n")
    else:
        out.write(f"{pad}{_flat(value)}\n")


def _is_flat(v):
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _flat(v):
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)
