"""Command-line entry points: run, sweep, analyze, check."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import harness, io, metrics, properties
from .config import ConfigError, parse_config
from .graphs import Graph
from .models import HK


def _load_config(path: str):
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _cmd_run(args) -> int:
    doc = _load_config(args.config)
    if args.seed is not None:
        from dataclasses import replace
        doc = replace(doc, base_seed=args.seed)
    cfg = doc.to_sweep_config()
    tasks = harness.sweep_plan(cfg)
    points = len(cfg.grid_points())
    if points != 1:
        raise ValueError(f"'run' needs a config with exactly one grid point, got {points}")
    task = tasks[0]
    g, meta = harness.sweep_graph(cfg, task.graph_id)
    x0 = harness.sweep_opinions(cfg, g, task.graph_id, task.trial)
    run_cfg = harness._task_run_config(cfg, task)
    out_dir = Path(args.out or doc.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.traces:
        if cfg.model == HK:
            traced = harness.run_traced_hk(g, x0, run_cfg, graph_kind=cfg.graph.kind)
        else:
            traced = harness.run_traced_dw(g, x0, run_cfg, graph_kind=cfg.graph.kind)
        result = traced.result
    else:
        traced = None
        result = harness.execute_task(cfg, task)
    json_path = out_dir / f"run_{task.run_index:06d}.json"
    with open(json_path, "w", encoding="utf-8") as fh:
        io.write_run_json(result, fh, traced=traced, graph=g if traced else None)
    csv_path = out_dir / "results.csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        io.write_results_csv([result], fh)
    print(f"graph: {meta}")
    print(f"converged={result.converged} bailed_out={result.bailed_out} "
          f"T={result.T} n_major={result.n_major} n_minor={result.n_minor} "
          f"entropy={result.entropy} w_fraction={result.w_fraction}")
    print(f"wrote {csv_path} and {json_path}")
    return 0


def _existing_keys(csv_path: Path) -> set:
    if not csv_path.exists() or csv_path.stat().st_size == 0:
        return set()
    with open(csv_path, "r", encoding="utf-8") as fh:
        done = io.read_results_csv(fh)
    return {(r.graph_id, r.trial, r.gamma, r.delta, r.c0, r.mu) for r in done}


def _cmd_sweep(args) -> int:
    doc = _load_config(args.config)
    cfg = doc.to_sweep_config()
    out_dir = Path(args.out or doc.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "results.csv"
    skip = _existing_keys(csv_path)
    plan = harness.sweep_plan(cfg)
    total = len(plan)
    remaining = total - len(skip)
    if skip:
        print(f"resuming: {len(skip)} of {total} runs already in {csv_path}",
              file=sys.stderr)
    mode = "a" if skip else "w"
    failures: list[harness.RunFailure] = []
    runs_dir = out_dir / "runs"
    if args.traces:
        runs_dir.mkdir(exist_ok=True)
    done = 0
    with open(csv_path, mode, encoding="utf-8") as fh:
        if not skip:
            fh.write(",".join(io.CSV_COLUMNS) + "\n")
            fh.flush()
        if args.traces:
            outputs = _traced_sweep(cfg, skip, runs_dir)
        else:
            outputs = harness.run_sweep(cfg, workers=args.threads, skip=skip)
        for item in outputs:
            done += 1
            if isinstance(item, harness.RunFailure):
                failures.append(item)
                print(f"[{done}/{remaining}] FAILED {item.task.key()}: {item.error}",
                      file=sys.stderr)
                continue
            io.write_result_row(item, fh)
            fh.flush()
            print(f"[{done}/{remaining}] graph={item.graph_id} trial={item.trial} "
                  f"gamma={item.gamma} delta={item.delta} c0={item.c0} mu={item.mu} "
                  f"T={item.T} converged={item.converged}", file=sys.stderr)
    if failures:
        log = out_dir / "failures.log"
        with open(log, "a", encoding="utf-8") as fh:
            for f in failures:
                fh.write(f"{f.task}: {f.error}\n")
        print(f"{len(failures)} run(s) failed; see {log}", file=sys.stderr)
        return 1
    print(f"wrote {csv_path}")
    return 0


def _traced_sweep(cfg, skip, runs_dir):
    for task in harness.sweep_plan(cfg):
        if task.key() in skip:
            continue
        g, _ = harness.sweep_graph(cfg, task.graph_id)
        x0 = harness.sweep_opinions(cfg, g, task.graph_id, task.trial)
        run_cfg = harness._task_run_config(cfg, task)
        try:
            if cfg.model == HK:
                traced = harness.run_traced_hk(g, x0, run_cfg, graph_kind=cfg.graph.kind,
                                               graph_id=task.graph_id, trial=task.trial)
            else:
                traced = harness.run_traced_dw(g, x0, run_cfg, graph_kind=cfg.graph.kind,
                                               graph_id=task.graph_id, trial=task.trial)
        except Exception as exc:  # noqa: BLE001
            yield harness.RunFailure(task=task, error=f"{type(exc).__name__}: {exc}")
            continue
        with open(runs_dir / f"run_{task.run_index:06d}.json", "w", encoding="utf-8") as fh:
            io.write_run_json(traced.result, fh, traced=traced, graph=g)
        yield traced.result


def _cmd_analyze(args) -> int:
    results = []
    for path in args.csv:
        with open(path, "r", encoding="utf-8") as fh:
            results.extend(io.read_results_csv(fh))
    if not results:
        raise ValueError("no runs found in the given CSV files")
    group_keys = tuple(k.strip() for k in args.group.split(",") if k.strip())
    rows = harness.summarize(results, group_keys)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            io.write_summary_csv(rows, group_keys, harness.SUMMARY_METRICS, fh)
        print(f"wrote {args.out}")
    else:
        io.write_summary_csv(rows, group_keys, harness.SUMMARY_METRICS, sys.stdout)
    return 0


def _check_one(path: str, eps: float) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = io.read_run_json(fh)
    result = doc["result"]
    traces_doc = doc.get("traces")
    if traces_doc is None:
        raise ValueError(f"{path}: no traces (re-run with --traces)")
    g = Graph(traces_doc["n"],
              [e[0] for e in traces_doc["edges"]],
              [e[1] for e in traces_doc["edges"]])
    assignment = np.asarray(doc["final_assignment"], dtype=np.int64)
    hist = properties.EffectiveGraphHistory(
        times=np.asarray(traces_doc["effective_history"]["times"]),
        edge_sets=[frozenset(s) for s in traces_doc["effective_history"]["edge_sets"]])
    final_eff = hist.edge_sets[-1]
    r = assignment.max() + 1 if assignment.size else 0
    sizes = np.bincount(assignment, minlength=r)
    same = assignment[g.edge_src] == assignment[g.edge_dst]
    internal_orig = np.bincount(assignment[g.edge_src[same]], minlength=r)
    eff_ids = np.asarray(sorted(final_eff), dtype=np.int64)
    internal_eff = np.bincount(assignment[g.edge_src[eff_ids]], minlength=r) \
        if eff_ids.size else np.zeros(r, dtype=np.int64)
    profile = metrics.ClusterProfile(assignment=assignment, sizes=sizes,
                                     internal_edges_original=internal_orig,
                                     internal_edges_effective=internal_eff)
    strict = result["model"] == HK
    n_zero = n_one = n_undet = onset_missing = 0
    for tr_doc in traces_doc["confidence"]:
        tr = properties.ConfidenceTrace(
            edge=tr_doc["edge"], times=np.asarray(tr_doc["times"]),
            values=np.asarray(tr_doc["values"]),
            same_limit_cluster=tr_doc["same_limit_cluster"])
        cls = properties.classify_confidence_limit(tr, eps)
        if cls is properties.LimitClass.ZERO:
            n_zero += 1
        elif cls is properties.LimitClass.ONE:
            n_one += 1
        else:
            n_undet += 1
        if tr.values.size >= 2 and properties.eventual_monotonicity_onset(tr, strict=strict) is None:
            onset_missing += 1
    fixation = properties.effective_graph_fixation(hist)
    cross_ok = properties.cross_cluster_edge_check(hist, profile, g)
    return {
        "file": path, "model": result["model"], "n_traces": len(traces_doc["confidence"]),
        "n_zero": n_zero, "n_one": n_one, "n_undetermined": n_undet,
        "onset_missing": onset_missing,
        "fixation_time": None if fixation is None else int(fixation),
        "cross_cluster_ok": cross_ok,
    }


def _cmd_check(args) -> int:
    rows = [_check_one(path, args.eps) for path in args.json]
    cols = ["file", "model", "n_traces", "n_zero", "n_one", "n_undetermined",
            "onset_missing", "fixation_time", "cross_cluster_ok"]
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        sink.write(",".join(cols) + "\n")
        for row in rows:
            sink.write(",".join(io._format(row[c]) for c in cols) + "\n")
    finally:
        if args.out:
            sink.close()
            print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abcm",
        description="Adaptive bounded-confidence opinion-model simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a single run (one grid point)")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--seed", type=int, default=None,
                       help="override the config's base_seed")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--traces", action="store_true",
                       help="record confidence traces and effective-graph history")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="execute a full Monte Carlo sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default=None, help="output directory")
    p_sweep.add_argument("--threads", type=int, default=1,
                         help="max parallel workers (processes)")
    p_sweep.add_argument("--traces", action="store_true",
                         help="also write per-run trace JSONs (large; runs serially)")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_an = sub.add_parser("analyze", help="aggregate result CSVs into a summary table")
    p_an.add_argument("csv", nargs="+", help="results CSV files")
    p_an.add_argument("--group", default="gamma,delta,c0,mu",
                      help="comma-separated grouping columns")
    p_an.add_argument("--out", default=None, help="summary CSV path (default stdout)")
    p_an.set_defaults(func=_cmd_analyze)

    p_ck = sub.add_parser("check", help="limit-behavior checks over run trace JSONs")
    p_ck.add_argument("json", nargs="+", help="per-run JSON files with traces")
    p_ck.add_argument("--eps", type=float, default=1e-3,
                      help="classification band around the limits 0 and 1")
    p_ck.add_argument("--out", default=None, help="verdict CSV path (default stdout)")
    p_ck.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
