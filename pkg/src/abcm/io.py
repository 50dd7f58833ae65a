"""Persistent output formats: the results CSV and per-run JSON artifacts.

The CSV schema is fixed: the columns below, one header row, one row per
run, '.' decimal separator, no locale formatting. Floats use Python repr
(shortest round-trip form), booleans are lowercase true/false, and absent
values (mu for the synchronous model, metrics of indeterminable runs) are
empty fields. Identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence, TextIO

from .graphs import Graph
from .harness import RunResult, TracedRun

CSV_COLUMNS = (
    "model", "graph_kind", "graph_id", "trial", "gamma", "delta", "c0", "mu",
    "seed", "converged", "bailed_out", "clusters_determinable", "T",
    "n_major", "n_minor", "entropy", "w_fraction", "tolerance", "check_interval",
)

SUMMARY_FIXED_COLUMNS = ("n_runs", "n_used", "n_bailed_out", "n_indeterminable")


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results_csv(results: Sequence[RunResult], sink: TextIO) -> None:
    """One row per run in the given order, header first."""
    sink.write(",".join(CSV_COLUMNS) + "\n")
    for r in results:
        write_result_row(r, sink)


def write_result_row(r: RunResult, sink: TextIO) -> None:
    sink.write(",".join(_format(getattr(r, col)) for col in CSV_COLUMNS) + "\n")


def _parse_optional_float(text: str) -> Optional[float]:
    return None if text == "" else float(text)


def _parse_optional_int(text: str) -> Optional[int]:
    return None if text == "" else int(text)


def _parse_bool(text: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def read_results_csv(source: TextIO) -> list[RunResult]:
    """Parse a results CSV back into RunResult records."""
    header = source.readline().rstrip("\n")
    if header.split(",") != list(CSV_COLUMNS):
        raise ValueError("unexpected results CSV header")
    out = []
    for line in source:
        line = line.rstrip("\n")
        if not line:
            continue
        f = line.split(",")
        if len(f) != len(CSV_COLUMNS):
            raise ValueError(f"expected {len(CSV_COLUMNS)} fields, got {len(f)}")
        row = dict(zip(CSV_COLUMNS, f))
        out.append(RunResult(
            model=row["model"], graph_kind=row["graph_kind"],
            graph_id=int(row["graph_id"]), trial=int(row["trial"]),
            gamma=float(row["gamma"]), delta=float(row["delta"]), c0=float(row["c0"]),
            mu=_parse_optional_float(row["mu"]), seed=int(row["seed"]),
            converged=_parse_bool(row["converged"]),
            bailed_out=_parse_bool(row["bailed_out"]),
            clusters_determinable=_parse_bool(row["clusters_determinable"]),
            T=int(row["T"]),
            n_major=_parse_optional_int(row["n_major"]),
            n_minor=_parse_optional_int(row["n_minor"]),
            entropy=_parse_optional_float(row["entropy"]),
            w_fraction=_parse_optional_float(row["w_fraction"]),
            tolerance=float(row["tolerance"]),
            check_interval=int(row["check_interval"])))
    return out


def result_to_dict(r: RunResult) -> dict:
    d = {col: getattr(r, col) for col in CSV_COLUMNS}
    d["w_degenerate"] = r.w_degenerate
    d["wall_s"] = r.wall_s
    return d


def write_run_json(result: RunResult, sink: TextIO,
                   traced: Optional[TracedRun] = None,
                   graph: Optional["Graph"] = None) -> None:
    """Per-run JSON: the CSV fields plus optional traces and final clusters.

    When traces are included the graph must be supplied; its edge endpoints
    go into the document so downstream checks can rebuild it.
    """
    doc: dict = {"result": result_to_dict(result)}
    if traced is not None:
        if graph is None:
            raise ValueError("writing traces requires the graph")
        doc["final_assignment"] = traced.final_profile.assignment.tolist()
        doc["traces"] = {
            "n": graph.n,
            "edges": [[int(i), int(j)] for i, j in
                      zip(graph.edge_src.tolist(), graph.edge_dst.tolist())],
            "confidence": [
                {"edge": tr.edge,
                 "times": tr.times.tolist(),
                 "values": tr.values.tolist(),
                 "same_limit_cluster": tr.same_limit_cluster}
                for tr in traced.traces
            ],
            "effective_history": {
                "times": traced.history.times.tolist(),
                "edge_sets": [sorted(s) for s in traced.history.edge_sets],
            },
        }
    json.dump(doc, sink, sort_keys=True, separators=(",", ":"))
    sink.write("\n")


def read_run_json(source: TextIO) -> dict:
    """Load a per-run JSON document (see write_run_json for the layout)."""
    return json.load(source)


def summary_columns(group_keys: Sequence[str], metrics: Sequence[str]) -> list[str]:
    cols = list(group_keys) + list(SUMMARY_FIXED_COLUMNS)
    for m in metrics:
        cols.append(f"{m}_mean")
        cols.append(f"{m}_std")
    return cols


def write_summary_csv(rows: Sequence[dict], group_keys: Sequence[str],
                      metrics: Sequence[str], sink: TextIO) -> None:
    """Summary table from harness.summarize, same formatting rules as results."""
    cols = summary_columns(group_keys, metrics)
    sink.write(",".join(cols) + "\n")
    for row in rows:
        sink.write(",".join(_format(row.get(c)) for c in cols) + "\n")
