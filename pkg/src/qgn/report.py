"""Rendering of solve results: trace CSV, JSON summaries, fixed-width tables."""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Optional, Sequence

from .qcalc import DilationParams
from .solver import SolveResult

# Schema of one run as emitted by ``solve --format json`` (and each entry of
# ``sweep --format json``'s "runs").
RESULT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["problem", "q", "status", "iterations", "final_norm", "final_x", "trace"],
    "properties": {
        "problem": {"type": "string"},
        "q": {
            "oneOf": [
                {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0, "maximum": 1}, "minItems": 1},
            ]
        },
        "status": {
            "enum": ["Converged", "MaxIterationsReached", "SingularSystem", "NumericalFailure", "InvalidPoint"]
        },
        "iterations": {"type": "integer", "minimum": 0},
        "final_norm": {"type": ["number", "null"]},
        "final_sse": {"type": ["number", "null"]},
        "final_x": {"type": "array", "items": {"type": "number"}},
        "final_residuals": {"type": ["array", "null"], "items": {"type": "number"}},
        "message": {"type": "string"},
        "trace": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["k", "x", "residuals", "sse", "step_norm"],
                "properties": {
                    "k": {"type": "integer", "minimum": 1},
                    "x": {"type": "array", "items": {"type": "number"}},
                    "residuals": {"type": "array", "items": {"type": "number"}},
                    "sse": {"type": "number", "minimum": 0},
                    "step_norm": {"type": "number", "minimum": 0},
                },
                "additionalProperties": False,
            },
        },
    },
}

SWEEP_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["problem", "runs"],
    "properties": {"problem": {"type": "string"}, "runs": {"type": "array", "items": RESULT_SCHEMA}},
}


def _num(v) -> Optional[float]:
    v = float(v)
    return v if math.isfinite(v) else None


def q_value(q: DilationParams):
    vals = list(q.values)
    return vals[0] if len(set(vals)) == 1 else vals


def result_to_dict(problem: str, q: DilationParams, result: SolveResult) -> dict:
    res = result.final_residuals
    return {
        "problem": problem,
        "q": q_value(q),
        "status": result.status.value,
        "iterations": result.iterations,
        "final_norm": _num(result.final_norm),
        "final_sse": _num(result.final_sse),
        "final_x": [float(v) for v in result.final_x],
        "final_residuals": None if res is None else [float(v) for v in res],
        "message": result.message,
        "trace": [
            {
                "k": rec.k,
                "x": [float(v) for v in rec.x],
                "residuals": [float(v) for v in rec.residuals],
                "sse": float(rec.sse),
                "step_norm": float(rec.step_norm),
            }
            for rec in result.trace
        ],
    }


def to_json(obj) -> str:
    # json emits shortest round-trip reprs, i.e. full double precision.
    return json.dumps(obj, indent=2) + "\n"


def _fixed(v: float, decimals: int) -> str:
    return f"{v:.{decimals}f}"


def trace_csv(result: SolveResult, n: int, m: int) -> str:
    """Columns k, x_1..x_n, f_1..f_m, sse, step_norm with 6 fixed decimals."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k"] + [f"x_{i + 1}" for i in range(n)] + [f"f_{i + 1}" for i in range(m)] + ["sse", "step_norm"])
    for rec in result.trace:
        w.writerow(
            [rec.k]
            + [_fixed(v, 6) for v in rec.x]
            + [_fixed(v, 6) for v in rec.residuals]
            + [_fixed(rec.sse, 6), _fixed(rec.step_norm, 6)]
        )
    return buf.getvalue()


def _sci(v: float) -> str:
    return "nan" if not math.isfinite(v) else f"{v:.4e}"


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


def trace_table(problem: str, q: DilationParams, result: SolveResult, n: int, m: int) -> str:
    qv = q_value(q)
    qtxt = f"{qv:g}" if not isinstance(qv, list) else ",".join(f"{v:g}" for v in qv)
    head = (
        f"problem = {problem}  q = {qtxt}  status = {result.status.value}\n"
        f"Iterations = {result.iterations}\n"
        f"norm = {_sci(result.final_norm)}\n"
    )
    header = ["k"] + [f"x{i + 1}" for i in range(n)] + [f"f{i + 1}" for i in range(m)]
    rows = [
        [str(r.k)] + [_fixed(v, 4) for v in r.x] + [_fixed(v, 4) for v in r.residuals] for r in result.trace
    ]
    out = head + _table(header, rows)
    if result.message:
        out += f"note: {result.message}\n"
    return out


def summary_rows(runs: Sequence[tuple[DilationParams, SolveResult]], n: int, m: int, decimals: int):
    header = ["q", "status", "iterations", "final_norm"] + [f"x_{i + 1}" for i in range(n)] + [
        f"f_{i + 1}" for i in range(m)
    ]
    rows = []
    for q, res in runs:
        qv = q_value(q)
        qtxt = f"{qv:g}" if not isinstance(qv, list) else " ".join(f"{v:g}" for v in qv)
        fr = res.final_residuals
        fcols = [_fixed(v, decimals) for v in fr] if fr is not None else ["nan"] * m
        rows.append(
            [qtxt, res.status.value, str(res.iterations), _sci(res.final_norm)]
            + [_fixed(v, decimals) for v in res.final_x]
            + fcols
        )
    return header, rows


def summary_table(runs, n: int, m: int) -> str:
    header, rows = summary_rows(runs, n, m, 4)
    return _table(header, rows)


def summary_csv(runs, n: int, m: int) -> str:
    header, rows = summary_rows(runs, n, m, 6)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def comparison_table(rows: Sequence[dict]) -> str:
    header = ["method", "q", "status", "iterations", "x", "f(x)"]
    body = [
        [
            r["method"],
            "-" if r["q"] is None else f"{r['q']:g}",
            r["status"],
            str(r["iterations"]),
            " ".join(f"{v:.4f}" for v in r["final_x"]),
            _sci(r["final_value"]) if r["final_value"] is not None else "nan",
        ]
        for r in rows
    ]
    return _table(header, body)


def comparison_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["method", "q", "status", "iterations", "final_x", "final_value"])
    for r in rows:
        w.writerow(
            [
                r["method"],
                "" if r["q"] is None else f"{r['q']:g}",
                r["status"],
                r["iterations"],
                " ".join(_fixed(v, 6) for v in r["final_x"]),
                "" if r["final_value"] is None else _fixed(r["final_value"], 6),
            ]
        )
    return buf.getvalue()


__all__ = [
    "RESULT_SCHEMA",
    "SWEEP_SCHEMA",
    "comparison_csv",
    "comparison_table",
    "result_to_dict",
    "summary_csv",
    "summary_table",
    "to_json",
    "trace_csv",
    "trace_table",
]
