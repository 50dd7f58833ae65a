"""Single runs and Monte Carlo sweeps with a reproducible seeding protocol.

Seeding: every random stream is derived from a 64-bit base seed with the
splitmix64 avalanche (see mix_seed). Graph k uses mix_seed(base, 1, k);
opinion set (k, m) uses mix_seed(base, 2, k, m); the run at grid index gi
uses mix_seed(base, 3, k, m, gi). Opinion sets therefore depend only on
(base, k, m) and are reused bitwise across all grid points, matching the
sweep protocol of reusing initial opinions for every parameter value.

Stopping: a run converges at the first checked time whose effective-graph
clusters all have opinion spread strictly below the tolerance. Synchronous
runs are checked every check_interval rounds (default 1), asynchronous runs
every check_interval edge selections (default one sweep of |E| selections),
plus once at t=0 and once at the bailout boundary. The synchronous path
gates the full check on the round's max opinion movement: a converged state
can only move every node by less than the tolerance, so skipping the check
while movement is at or above it never changes the reported time.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from . import _kernels, metrics
from .graphs import (Graph, SbmSpec, generate_complete, generate_er,
                     generate_sbm, largest_connected_component, load_edge_list)
from .models import DW, HK, ModelParams, SimState, _dw_apply
from .properties import ConfidenceTrace, EffectiveGraphHistory

DEFAULT_TOLERANCE = {HK: 1e-6, DW: 0.02}
DEFAULT_BAILOUT = 10**6

_MASK64 = (1 << 64) - 1
_GRAPH_TAG = 1
_OPINION_TAG = 2
_RUN_TAG = 3


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)

def mix_seed(*parts: int) -> int:
    """Fold integers into one 64-bit seed.

    h starts at 0; for each part, h = splitmix64(h XOR (part mod 2**64))
    with splitmix64(z) = let z = z + 0x9E3779B97F4A7C15; z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB;
    return z ^ (z >> 31), all modulo 2**64.
    """
    h = 0
    for p in parts:
        h = _splitmix64(h ^ (int(p) & _MASK64))
    return h


def initial_opinions(n: int, rng: np.random.Generator) -> np.ndarray:
    """n independent uniform draws on [0, 1); deterministic given the generator."""
    if n < 1:
        raise ValueError("n must be positive")
    return rng.random(n)


@dataclass(frozen=True)
class GraphSpec:
    """Declarative graph source: a generator family or an edge-list path.

    Random families (er, sbm) are reduced to their largest connected
    component after sampling; original and reduced sizes land in the build
    metadata. Edge lists are reduced too unless use_lcc is False.
    """

    kind: str  # complete | er | sbm | edge_list
    n: Optional[int] = None
    p: Optional[float] = None
    frac_a: Optional[float] = None
    p_aa: Optional[float] = None
    p_bb: Optional[float] = None
    p_ab: Optional[float] = None
    path: Optional[str] = None
    use_lcc: bool = True

    def __post_init__(self):
        if self.kind == "complete":
            if self.n is None or self.n < 1:
                raise ValueError("complete graph requires n >= 1")
        elif self.kind == "er":
            if self.n is None or self.n < 1:
                raise ValueError("er graph requires n >= 1")
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError("er graph requires p in [0, 1]")
        elif self.kind == "sbm":
            if None in (self.n, self.frac_a, self.p_aa, self.p_bb, self.p_ab):
                raise ValueError("sbm graph requires n, frac_a, p_aa, p_bb, p_ab")
            SbmSpec(self.n, self.frac_a, self.p_aa, self.p_bb, self.p_ab)
        elif self.kind == "edge_list":
            if not self.path:
                raise ValueError("edge_list graph requires a path")
        else:
            raise ValueError(f"unknown graph kind {self.kind!r}")

    def build(self, rng: np.random.Generator) -> tuple[Graph, dict]:
        if self.kind == "complete":
            g = generate_complete(self.n)
            return g, {"n": g.n, "m": g.num_edges}
        if self.kind == "er":
            g0 = generate_er(self.n, self.p, rng)
            g, _ = largest_connected_component(g0)
            return g, {"original_n": g0.n, "original_m": g0.num_edges,
                       "n": g.n, "m": g.num_edges}
        if self.kind == "sbm":
            spec = SbmSpec(self.n, self.frac_a, self.p_aa, self.p_bb, self.p_ab)
            g0, _ = generate_sbm(spec, rng)
            g, _ = largest_connected_component(g0)
            return g, {"original_n": g0.n, "original_m": g0.num_edges,
                       "n": g.n, "m": g.num_edges}
        with open(self.path, "r", encoding="utf-8") as fh:
            g0, report = load_edge_list(fh)
        meta = {"original_n": g0.n, "original_m": g0.num_edges,
                "duplicate_lines": report.duplicates}
        if self.use_lcc:
            g, _ = largest_connected_component(g0)
        else:
            g = g0
        meta.update({"n": g.n, "m": g.num_edges})
        return g, meta


@dataclass(frozen=True)
class RunConfig:
    """Per-run protocol: parameters, stopping tolerance, bailout, seed."""

    params: ModelParams
    tolerance: Optional[float] = None
    bailout: int = DEFAULT_BAILOUT
    check_interval: Optional[int] = None
    seed: int = 0
    run_to_convergence: bool = False
    indeterminate_factor: float = 10.0

    def __post_init__(self):
        if self.tolerance is not None and self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.bailout < 1:
            raise ValueError("bailout must be at least 1")
        if self.check_interval is not None and self.check_interval < 1:
            raise ValueError("check_interval must be at least 1")

    def resolved_tolerance(self) -> float:
        return self.tolerance if self.tolerance is not None else DEFAULT_TOLERANCE[self.params.kind]

    def resolved_interval(self, g: Graph) -> int:
        if self.check_interval is not None:
            return self.check_interval
        return 1 if self.params.kind == HK else max(1, g.num_edges)


@dataclass
class RunResult:
    """Outcome of one run: flags, convergence time, and final-state metrics.

    entropy, w_fraction, and the cluster counts are recorded only when the
    final clusters are determinable; a bailout whose worst cluster spread
    exceeds indeterminate_factor * tolerance leaves them as None.
    """

    model: str
    graph_kind: str
    graph_id: int
    trial: int
    gamma: float
    delta: float
    c0: float
    mu: Optional[float]
    seed: int
    converged: bool
    bailed_out: bool
    clusters_determinable: bool
    T: int
    n_major: Optional[int]
    n_minor: Optional[int]
    entropy: Optional[float]
    w_fraction: Optional[float]
    tolerance: float
    check_interval: int
    w_degenerate: bool = False
    wall_s: float = 0.0


def _state(t: int, x: np.ndarray, conf: np.ndarray) -> SimState:
    return SimState(t, x, conf)


def _run_hk(g: Graph, x0: np.ndarray, cfg: RunConfig,
            recorder: Optional[Callable[[int, np.ndarray, np.ndarray], None]] = None,
            ) -> tuple[bool, int, np.ndarray, np.ndarray]:
    params = cfg.params
    tol = cfg.resolved_tolerance()
    interval = cfg.resolved_interval(g)
    # a converged state moves every opinion by strictly less than tol, so this
    # slightly padded trigger never skips a check that could succeed; the
    # padding absorbs the few-ulp slack of float averaging
    trigger = tol * (1.0 + 1e-9) + 1e-15
    x = x0.copy()
    conf = np.full(g.num_edges, params.c0)
    x_next = np.empty_like(x)
    conf_next = np.empty_like(conf)
    t = 0
    if recorder is not None:
        recorder(t, x, conf)
    while True:
        if not cfg.run_to_convergence and t >= cfg.bailout:
            conv = metrics.converged(_state(t, x, conf), g, tol)
            return conv, t, x, conf
        move = _kernels.hk_round(x, conf, g.nbr, g.nbr_edge, g.nbr_ptr,
                                 g.edge_src, g.edge_dst,
                                 params.gamma, params.delta, x_next, conf_next)
        if (t % interval == 0 and move < trigger
                and metrics.converged(_state(t, x, conf), g, tol)):
            return True, t, x, conf
        x, x_next = x_next, x
        conf, conf_next = conf_next, conf
        t += 1
        if recorder is not None:
            recorder(t, x, conf)


def _run_dw(g: Graph, x0: np.ndarray, cfg: RunConfig,
            ) -> tuple[bool, int, np.ndarray, np.ndarray]:
    params = cfg.params
    if g.num_edges == 0:
        raise ValueError("DW run requires a graph with at least one edge")
    tol = cfg.resolved_tolerance()
    interval = cfg.resolved_interval(g)
    rng = np.random.default_rng(cfg.seed)
    x = x0.copy()
    conf = np.full(g.num_edges, params.c0)
    t = 0
    conv = metrics.converged(_state(t, x, conf), g, tol)
    while not conv:
        if not cfg.run_to_convergence and t >= cfg.bailout:
            break
        window = interval if cfg.run_to_convergence else min(interval, cfg.bailout - t)
        selections = rng.integers(0, g.num_edges, size=window)
        _kernels.dw_window(x, conf, g.edge_src, g.edge_dst, selections,
                           params.mu, params.gamma, params.delta)
        t += window
        conv = metrics.converged(_state(t, x, conf), g, tol)
    return conv, t, x, conf


def _finalize(g: Graph, cfg: RunConfig, conv: bool, t: int,
              x: np.ndarray, conf: np.ndarray, wall: float,
              graph_kind: str, graph_id: int, trial: int,
              ) -> tuple[RunResult, metrics.ClusterProfile]:
    params = cfg.params
    tol = cfg.resolved_tolerance()
    profile = metrics.opinion_clusters(_state(t, x, conf), g)
    bailed = not conv
    if conv:
        determinable = True
    else:
        spreads = metrics.cluster_spreads(profile, x)
        worst = float(spreads.max()) if spreads.size else 0.0
        determinable = worst <= cfg.indeterminate_factor * tol
    if determinable:
        n_major, n_minor = metrics.classify_clusters(profile, g.n)
        entropy = metrics.shannon_entropy(profile, g.n)
        w_fraction, w_degenerate = metrics.weighted_edge_fraction(profile, g.n)
    else:
        n_major = n_minor = None
        entropy = w_fraction = None
        w_degenerate = False
    result = RunResult(
        model=params.kind, graph_kind=graph_kind, graph_id=graph_id, trial=trial,
        gamma=params.gamma, delta=params.delta, c0=params.c0, mu=params.mu,
        seed=cfg.seed, converged=conv, bailed_out=bailed,
        clusters_determinable=determinable, T=t,
        n_major=n_major, n_minor=n_minor, entropy=entropy, w_fraction=w_fraction,
        tolerance=tol, check_interval=cfg.resolved_interval(g),
        w_degenerate=w_degenerate, wall_s=wall)
    return result, profile


def run_single(g: Graph, x0: np.ndarray, cfg: RunConfig, *,
               graph_kind: str = "custom", graph_id: int = 0, trial: int = 0,
               ) -> RunResult:
    """Step one model until converged or bailed out; metrics at the final state."""
    if np.asarray(x0).shape != (g.n,):
        raise ValueError(f"opinion vector must have length {g.n}")
    start = time.perf_counter()
    if cfg.params.kind == HK:
        conv, t, x, conf = _run_hk(g, x0, cfg)
    else:
        conv, t, x, conf = _run_dw(g, x0, cfg)
    wall = time.perf_counter() - start
    result, _ = _finalize(g, cfg, conv, t, x, conf, wall,
                          graph_kind, graph_id, trial)
    return result


@dataclass
class TracedRun:
    """A run plus its recorded confidence traces and effective-graph history.

    The RunResult carries the at-convergence metrics; final_profile and the
    same_limit_cluster flags come from the last recorded state, i.e. after
    the post-convergence extension.
    """

    result: RunResult
    traces: list[ConfidenceTrace]
    history: EffectiveGraphHistory
    final_profile: metrics.ClusterProfile
    final_opinions: np.ndarray


def run_traced_hk(g: Graph, x0: np.ndarray, cfg: RunConfig, *,
                  extra_rounds: int = 500, graph_kind: str = "custom",
                  graph_id: int = 0, trial: int = 0) -> TracedRun:
    """Synchronous run sampled every round, extended past convergence."""
    times: list[int] = []
    conf_rows: list[np.ndarray] = []
    eff_sets: list[np.ndarray] = []

    def recorder(t: int, x: np.ndarray, conf: np.ndarray) -> None:
        times.append(t)
        conf_rows.append(conf.copy())
        eff_sets.append(metrics.effective_edges(_state(t, x, conf), g))

    start = time.perf_counter()
    conv, t_stop, x, conf = _run_hk(g, x0, cfg, recorder=recorder)
    x_stop = x.copy()
    conf_stop = conf.copy()
    x = x_stop.copy()
    conf = conf_stop.copy()
    x_next = np.empty_like(x)
    conf_next = np.empty_like(conf)
    t = t_stop
    for _ in range(extra_rounds):
        _kernels.hk_round(x, conf, g.nbr, g.nbr_edge, g.nbr_ptr,
                          g.edge_src, g.edge_dst,
                          cfg.params.gamma, cfg.params.delta, x_next, conf_next)
        x, x_next = x_next, x
        conf, conf_next = conf_next, conf
        t += 1
        recorder(t, x, conf)
    wall = time.perf_counter() - start
    result, _ = _finalize(g, cfg, conv, t_stop, x_stop, conf_stop, wall,
                          graph_kind, graph_id, trial)
    return _assemble_traced(g, result, times, conf_rows, eff_sets, x, conf)


def _assemble_traced(g, result, times, conf_rows, eff_sets, x, conf):
    t_arr = np.asarray(times)
    conf_mat = np.stack(conf_rows) if conf_rows else np.empty((0, g.num_edges))
    final_state = _state(int(t_arr[-1]) if t_arr.size else 0, x, conf)
    final_profile = metrics.opinion_clusters(final_state, g)
    labels = final_profile.assignment
    traces = [ConfidenceTrace(edge=e, times=t_arr, values=conf_mat[:, e],
                              same_limit_cluster=bool(labels[g.edge_src[e]] == labels[g.edge_dst[e]]))
              for e in range(g.num_edges)]
    history = EffectiveGraphHistory(times=t_arr, edge_sets=[frozenset(s.tolist()) for s in eff_sets])
    return TracedRun(result=result, traces=traces, history=history,
                     final_profile=final_profile, final_opinions=x.copy())


def run_traced_dw(g: Graph, x0: np.ndarray, cfg: RunConfig, *,
                  extra_selections: Optional[int] = None,
                  graph_kind: str = "custom", graph_id: int = 0, trial: int = 0,
                  ) -> TracedRun:
    """Asynchronous run with per-edge samples at touches plus a fixed stride.

    The stride equals the check interval; the selection stream matches
    run_single's (windowed draws from the same seed), so the reported T is
    identical.  The extension defaults to 50 * |E| extra selections.
    """
    params = cfg.params
    if g.num_edges == 0:
        raise ValueError("DW run requires a graph with at least one edge")
    m = g.num_edges
    tol = cfg.resolved_tolerance()
    interval = cfg.resolved_interval(g)
    rng = np.random.default_rng(cfg.seed)
    x = x0.copy()
    conf = np.full(m, params.c0)
    touch_t: list[list[int]] = [[] for _ in range(m)]
    touch_v: list[list[float]] = [[] for _ in range(m)]
    snap_t: list[int] = []
    snap_x: list[np.ndarray] = []
    snap_conf: list[np.ndarray] = []

    def snapshot(t: int) -> None:
        snap_t.append(t)
        snap_x.append(x.copy())
        snap_conf.append(conf.copy())

    def run_window(t: int, window: int) -> int:
        selections = rng.integers(0, m, size=window)
        for s in selections:
            rec = _dw_apply(x, conf, g, int(s), params.mu, params.gamma, params.delta)
            t += 1
            touch_t[rec.edge].append(t)
            touch_v[rec.edge].append(float(conf[rec.edge]))
        return t

    start = time.perf_counter()
    t = 0
    snapshot(t)
    conv = metrics.converged(_state(t, x, conf), g, tol)
    while not conv:
        if not cfg.run_to_convergence and t >= cfg.bailout:
            break
        window = interval if cfg.run_to_convergence else min(interval, cfg.bailout - t)
        t = run_window(t, window)
        snapshot(t)
        conv = metrics.converged(_state(t, x, conf), g, tol)
    result, _ = _finalize(g, cfg, conv, t, x, conf, time.perf_counter() - start,
                          graph_kind, graph_id, trial)
    extra = extra_selections if extra_selections is not None else 50 * m
    done = 0
    while done < extra:
        window = min(interval, extra - done)
        t = run_window(t, window)
        done += window
        snapshot(t)
    result.wall_s = time.perf_counter() - start

    snap_ts = np.asarray(snap_t)
    snap_conf_mat = np.stack(snap_conf)
    final_state = _state(t, x, conf)
    final_profile = metrics.opinion_clusters(final_state, g)
    labels = final_profile.assignment
    traces = []
    for e in range(m):
        ts = np.concatenate([snap_ts, np.asarray(touch_t[e], dtype=np.int64)])
        vs = np.concatenate([snap_conf_mat[:, e], np.asarray(touch_v[e])])
        order = np.argsort(ts, kind="stable")
        ts = ts[order]
        vs = vs[order]
        if ts.size > 1:
            keep = np.concatenate([[True], np.diff(ts) > 0])
            ts = ts[keep]
            vs = vs[keep]
        traces.append(ConfidenceTrace(
            edge=e, times=ts, values=vs,
            same_limit_cluster=bool(labels[g.edge_src[e]] == labels[g.edge_dst[e]])))
    eff_sets = []
    for k in range(snap_ts.size):
        st = _state(int(snap_ts[k]), snap_x[k], snap_conf[k])
        eff_sets.append(frozenset(metrics.effective_edges(st, g).tolist()))
    history = EffectiveGraphHistory(times=snap_ts, edge_sets=eff_sets)
    return TracedRun(result=result, traces=traces, history=history,
                     final_profile=final_profile, final_opinions=x.copy())


@dataclass(frozen=True)
class SweepConfig:
    """Full Monte Carlo experiment: graph source, parameter grids, counts."""

    model: str
    graph: GraphSpec
    gammas: tuple[float, ...]
    deltas: tuple[float, ...]
    c0s: tuple[float, ...]
    mus: Optional[tuple[float, ...]] = None
    graphs_per_setting: int = 1
    opinions_per_graph: int = 10
    base_seed: int = 0
    tolerance: Optional[float] = None
    bailout: int = DEFAULT_BAILOUT
    check_interval: Optional[int] = None
    run_to_convergence: bool = False
    indeterminate_factor: float = 10.0

    def __post_init__(self):
        if self.model not in (HK, DW):
            raise ValueError(f"model must be {HK!r} or {DW!r}")
        for name in ("gammas", "deltas", "c0s"):
            if not getattr(self, name):
                raise ValueError(f"{name} grid must be nonempty")
        if self.model == DW and not self.mus:
            raise ValueError("DW sweeps require a mu grid")
        if self.graphs_per_setting < 1 or self.opinions_per_graph < 1:
            raise ValueError("graphs_per_setting and opinions_per_graph must be >= 1")

    def grid_points(self) -> list[tuple[float, float, float, Optional[float]]]:
        mus = self.mus if self.model == DW else (None,)
        return [(g_, d, c, mu) for g_, d, c, mu
                in product(self.gammas, self.deltas, self.c0s, mus)]


@dataclass(frozen=True)
class RunTask:
    """One planned run: identity plus its derived seed."""

    run_index: int
    graph_id: int
    trial: int
    gamma: float
    delta: float
    c0: float
    mu: Optional[float]
    seed: int

    def key(self) -> tuple:
        return (self.graph_id, self.trial, self.gamma, self.delta, self.c0, self.mu)


@dataclass
class RunFailure:
    """A run that raised; sweeps record these and continue."""

    task: RunTask
    error: str


def sweep_plan(cfg: SweepConfig) -> list[RunTask]:
    """Deterministic run list: graphs x opinion sets x grid points."""
    grid = cfg.grid_points()
    tasks = []
    idx = 0
    for k in range(cfg.graphs_per_setting):
        for m in range(cfg.opinions_per_graph):
            for gi, (gamma, delta, c0, mu) in enumerate(grid):
                tasks.append(RunTask(
                    run_index=idx, graph_id=k, trial=m,
                    gamma=gamma, delta=delta, c0=c0, mu=mu,
                    seed=mix_seed(cfg.base_seed, _RUN_TAG, k, m, gi)))
                idx += 1
    return tasks


@lru_cache(maxsize=8)
def _cached_graph(spec: GraphSpec, base_seed: int, graph_id: int) -> tuple[Graph, tuple]:
    rng = np.random.default_rng(mix_seed(base_seed, _GRAPH_TAG, graph_id))
    g, meta = spec.build(rng)
    return g, tuple(sorted(meta.items()))


def sweep_graph(cfg: SweepConfig, graph_id: int) -> tuple[Graph, dict]:
    g, meta = _cached_graph(cfg.graph, cfg.base_seed, graph_id)
    return g, dict(meta)


def sweep_opinions(cfg: SweepConfig, g: Graph, graph_id: int, trial: int) -> np.ndarray:
    rng = np.random.default_rng(mix_seed(cfg.base_seed, _OPINION_TAG, graph_id, trial))
    return initial_opinions(g.n, rng)


def _task_run_config(cfg: SweepConfig, task: RunTask) -> RunConfig:
    params = ModelParams(kind=cfg.model, gamma=task.gamma, delta=task.delta,
                         c0=task.c0, mu=task.mu)
    return RunConfig(params=params, tolerance=cfg.tolerance, bailout=cfg.bailout,
                     check_interval=cfg.check_interval, seed=task.seed,
                     run_to_convergence=cfg.run_to_convergence,
                     indeterminate_factor=cfg.indeterminate_factor)


def execute_task(cfg: SweepConfig, task: RunTask) -> RunResult:
    """Run one planned task; pure function of (cfg, task)."""
    g, _ = sweep_graph(cfg, task.graph_id)
    x0 = sweep_opinions(cfg, g, task.graph_id, task.trial)
    return run_single(g, x0, _task_run_config(cfg, task),
                      graph_kind=cfg.graph.kind, graph_id=task.graph_id,
                      trial=task.trial)


def _pool_execute(args: tuple[SweepConfig, RunTask]):
    cfg, task = args
    try:
        return execute_task(cfg, task)
    except Exception as exc:  # noqa: BLE001 - per-run failures must not kill the sweep
        return RunFailure(task=task, error=f"{type(exc).__name__}: {exc}")


def run_sweep(cfg: SweepConfig, workers: int = 1,
              skip: Optional[set] = None) -> Iterator[RunResult | RunFailure]:
    """Execute the sweep plan, yielding results in deterministic task order.

    skip holds task keys (see RunTask.key) already completed; these are not
    re-run, which is what makes interrupted sweeps resumable.
    """
    tasks = sweep_plan(cfg)
    if skip:
        tasks = [t for t in tasks if t.key() not in skip]
    if workers <= 1:
        for task in tasks:
            yield _pool_execute((cfg, task))
        return
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(_pool_execute, [(cfg, t) for t in tasks], chunksize=1)


SUMMARY_METRICS = ("n_major", "n_minor", "entropy", "w_fraction", "log10_T")


def summarize(results: Sequence[RunResult],
              group_keys: Sequence[str] = ("gamma", "delta", "c0", "mu"),
              ) -> list[dict]:
    """Per-group count, mean, and sample standard deviation of each metric.

    Runs without determinable clusters are excluded from the metric means and
    counted separately; log10_T uses max(T, 1) so frozen-dynamics runs with
    T = 0 do not produce -inf.
    """
    if not results:
        raise ValueError("summarize requires at least one result")
    groups: dict[tuple, list[RunResult]] = {}
    for r in results:
        key = tuple(getattr(r, k) for k in group_keys)
        groups.setdefault(key, []).append(r)

    def sort_key(key: tuple):
        return tuple(-math.inf if v is None else v for v in key)

    rows = []
    for key in sorted(groups, key=sort_key):
        members = groups[key]
        usable = [r for r in members if r.clusters_determinable]
        row: dict = dict(zip(group_keys, key))
        row["n_runs"] = len(members)
        row["n_used"] = len(usable)
        row["n_bailed_out"] = sum(1 for r in members if r.bailed_out)
        row["n_indeterminable"] = sum(1 for r in members if not r.clusters_determinable)
        for metric in SUMMARY_METRICS:
            if metric == "log10_T":
                vals = [math.log10(max(r.T, 1)) for r in usable]
            else:
                vals = [getattr(r, metric) for r in usable]
            if vals:
                arr = np.asarray(vals, dtype=np.float64)
                row[f"{metric}_mean"] = float(arr.mean())
                row[f"{metric}_std"] = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
            else:
                row[f"{metric}_mean"] = None
                row[f"{metric}_std"] = None
        rows.append(row)
    return rows
