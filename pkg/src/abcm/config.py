"""Configuration documents: a strict JSON schema for runs and sweeps.

Grammar (JSON object; unknown keys are rejected everywhere):

    {
      "model": "HK" | "DW",                      required
      "graph": {
        "kind": "complete" | "er" | "sbm" | "edge_list",
        "n": int,                                complete/er/sbm
        "p": float,                              er
        "frac_a": float, "p_aa": float,
        "p_bb": float, "p_ab": float,            sbm
        "path": str, "lcc": bool (default true)  edge_list
      },
      "grid": {
        "gamma": [floats in [0,1]],              required, nonempty
        "delta": [floats in [0,1]],              required, nonempty
        "c0":    [floats in [0,1]],              required, nonempty
        "mu":    [floats in (0,0.5]]             required iff model == "DW"
      },
      "graphs_per_setting": int >= 1,            default 5 for er/sbm, else 1
      "opinions_per_graph": int >= 1,            default 10
      "base_seed": int,                          default 0
      "tolerance": float > 0,                    default 1e-6 (HK) / 0.02 (DW)
      "bailout": int >= 1,                       default 1000000
      "check_interval": int >= 1 | null,         default 1 round (HK) /
                                                 |E| selections (DW)
      "run_to_convergence": bool,                default false
      "indeterminate_factor": float > 0,         default 10.0
      "output_dir": str                          default "results"
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .harness import DEFAULT_BAILOUT, DEFAULT_TOLERANCE, GraphSpec, SweepConfig
from .models import DW, HK


class ConfigError(ValueError):
    """Schema violation; the message names the offending path."""


_GRAPH_KEYS = {
    "complete": {"kind", "n"},
    "er": {"kind", "n", "p"},
    "sbm": {"kind", "n", "frac_a", "p_aa", "p_bb", "p_ab"},
    "edge_list": {"kind", "path", "lcc"},
}

_TOP_KEYS = {"model", "graph", "grid", "graphs_per_setting", "opinions_per_graph",
             "base_seed", "tolerance", "bailout", "check_interval",
             "run_to_convergence", "indeterminate_factor", "output_dir"}


@dataclass(frozen=True)
class ConfigDocument:
    """Validated configuration with defaults applied."""

    model: str
    graph: GraphSpec
    gammas: tuple[float, ...]
    deltas: tuple[float, ...]
    c0s: tuple[float, ...]
    mus: Optional[tuple[float, ...]]
    graphs_per_setting: int
    opinions_per_graph: int
    base_seed: int
    tolerance: float
    bailout: int
    check_interval: Optional[int]
    run_to_convergence: bool
    indeterminate_factor: float
    output_dir: str

    def to_sweep_config(self) -> SweepConfig:
        return SweepConfig(
            model=self.model, graph=self.graph,
            gammas=self.gammas, deltas=self.deltas, c0s=self.c0s, mus=self.mus,
            graphs_per_setting=self.graphs_per_setting,
            opinions_per_graph=self.opinions_per_graph,
            base_seed=self.base_seed, tolerance=self.tolerance,
            bailout=self.bailout, check_interval=self.check_interval,
            run_to_convergence=self.run_to_convergence,
            indeterminate_factor=self.indeterminate_factor)

    def serialize(self) -> str:
        """Canonical JSON text; parse_config(serialize()) reproduces self."""
        graph: dict = {"kind": self.graph.kind}
        if self.graph.kind in ("complete", "er", "sbm"):
            graph["n"] = self.graph.n
        if self.graph.kind == "er":
            graph["p"] = self.graph.p
        if self.graph.kind == "sbm":
            graph.update(frac_a=self.graph.frac_a, p_aa=self.graph.p_aa,
                         p_bb=self.graph.p_bb, p_ab=self.graph.p_ab)
        if self.graph.kind == "edge_list":
            graph["path"] = self.graph.path
            graph["lcc"] = self.graph.use_lcc
        grid: dict = {"gamma": list(self.gammas), "delta": list(self.deltas),
                      "c0": list(self.c0s)}
        if self.mus is not None:
            grid["mu"] = list(self.mus)
        doc = {
            "model": self.model,
            "graph": graph,
            "grid": grid,
            "graphs_per_setting": self.graphs_per_setting,
            "opinions_per_graph": self.opinions_per_graph,
            "base_seed": self.base_seed,
            "tolerance": self.tolerance,
            "bailout": self.bailout,
            "check_interval": self.check_interval,
            "run_to_convergence": self.run_to_convergence,
            "indeterminate_factor": self.indeterminate_factor,
            "output_dir": self.output_dir,
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def _require(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ConfigError(f"{path}: {message}")


def _as_number(value, path: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             path, f"expected a number, got {value!r}")
    return float(value)


def _as_int(value, path: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool),
             path, f"expected an integer, got {value!r}")
    return value


def _as_bool(value, path: str) -> bool:
    _require(isinstance(value, bool), path, f"expected a boolean, got {value!r}")
    return value


def _as_str(value, path: str) -> str:
    _require(isinstance(value, str), path, f"expected a string, got {value!r}")
    return value


def _grid_values(obj: dict, key: str, lo: float, hi: float, lo_open: bool,
                 required: bool) -> Optional[tuple[float, ...]]:
    path = f"grid.{key}"
    if key not in obj:
        _require(not required, path, "required grid is missing")
        return None
    values = obj[key]
    _require(isinstance(values, list) and values, path, "expected a nonempty array")
    out = []
    for i, v in enumerate(values):
        x = _as_number(v, f"{path}[{i}]")
        in_range = (lo < x if lo_open else lo <= x) and x <= hi
        interval = f"({lo}, {hi}]" if lo_open else f"[{lo}, {hi}]"
        _require(in_range, f"{path}[{i}]", f"value {x} outside {interval}")
        out.append(x)
    return tuple(out)


def _parse_graph(obj, path: str = "graph") -> GraphSpec:
    _require(isinstance(obj, dict), path, "expected an object")
    kind = _as_str(obj.get("kind", ""), f"{path}.kind")
    _require(kind in _GRAPH_KEYS, f"{path}.kind",
             f"expected one of {sorted(_GRAPH_KEYS)}, got {kind!r}")
    allowed = _GRAPH_KEYS[kind]
    for key in obj:
        _require(key in allowed, f"{path}.{key}", "unknown key")
    if kind == "complete":
        return GraphSpec(kind="complete", n=_as_int(obj.get("n"), f"{path}.n"))
    if kind == "er":
        return GraphSpec(kind="er", n=_as_int(obj.get("n"), f"{path}.n"),
                         p=_as_number(obj.get("p"), f"{path}.p"))
    if kind == "sbm":
        return GraphSpec(kind="sbm", n=_as_int(obj.get("n"), f"{path}.n"),
                         frac_a=_as_number(obj.get("frac_a"), f"{path}.frac_a"),
                         p_aa=_as_number(obj.get("p_aa"), f"{path}.p_aa"),
                         p_bb=_as_number(obj.get("p_bb"), f"{path}.p_bb"),
                         p_ab=_as_number(obj.get("p_ab"), f"{path}.p_ab"))
    use_lcc = _as_bool(obj["lcc"], f"{path}.lcc") if "lcc" in obj else True
    return GraphSpec(kind="edge_list", path=_as_str(obj.get("path"), f"{path}.path"),
                     use_lcc=use_lcc)


def parse_config(text: str) -> ConfigDocument:
    """Validate a JSON configuration and apply defaults."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    _require(isinstance(raw, dict), "$", "top level must be an object")
    for key in raw:
        _require(key in _TOP_KEYS, key, "unknown key")

    _require("model" in raw, "model", "required key is missing")
    model = _as_str(raw["model"], "model")
    _require(model in (HK, DW), "model", f"expected 'HK' or 'DW', got {model!r}")

    _require("graph" in raw, "graph", "required key is missing")
    try:
        graph = _parse_graph(raw["graph"])
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"graph: {exc}") from None

    _require("grid" in raw and isinstance(raw["grid"], dict), "grid",
             "expected an object")
    grid = raw["grid"]
    for key in grid:
        _require(key in {"gamma", "delta", "c0", "mu"}, f"grid.{key}", "unknown key")
    gammas = _grid_values(grid, "gamma", 0.0, 1.0, False, required=True)
    deltas = _grid_values(grid, "delta", 0.0, 1.0, False, required=True)
    c0s = _grid_values(grid, "c0", 0.0, 1.0, False, required=True)
    mus = _grid_values(grid, "mu", 0.0, 0.5, True, required=(model == DW))

    default_graphs = 5 if graph.kind in ("er", "sbm") else 1
    graphs_per_setting = _as_int(raw.get("graphs_per_setting", default_graphs),
                                 "graphs_per_setting")
    _require(graphs_per_setting >= 1, "graphs_per_setting", "must be >= 1")
    opinions_per_graph = _as_int(raw.get("opinions_per_graph", 10), "opinions_per_graph")
    _require(opinions_per_graph >= 1, "opinions_per_graph", "must be >= 1")
    base_seed = _as_int(raw.get("base_seed", 0), "base_seed")

    tolerance = _as_number(raw.get("tolerance", DEFAULT_TOLERANCE[model]), "tolerance")
    _require(tolerance > 0.0, "tolerance", "must be positive")
    bailout = _as_int(raw.get("bailout", DEFAULT_BAILOUT), "bailout")
    _require(bailout >= 1, "bailout", "must be >= 1")
    check_interval = raw.get("check_interval")
    if check_interval is not None:
        check_interval = _as_int(check_interval, "check_interval")
        _require(check_interval >= 1, "check_interval", "must be >= 1")
    run_to_convergence = _as_bool(raw.get("run_to_convergence", False),
                                  "run_to_convergence")
    indeterminate_factor = _as_number(raw.get("indeterminate_factor", 10.0),
                                      "indeterminate_factor")
    _require(indeterminate_factor > 0.0, "indeterminate_factor", "must be positive")
    output_dir = _as_str(raw.get("output_dir", "results"), "output_dir")

    return ConfigDocument(
        model=model, graph=graph, gammas=gammas, deltas=deltas, c0s=c0s, mus=mus,
        graphs_per_setting=graphs_per_setting, opinions_per_graph=opinions_per_graph,
        base_seed=base_seed, tolerance=tolerance, bailout=bailout,
        check_interval=check_interval, run_to_convergence=run_to_convergence,
        indeterminate_factor=indeterminate_factor, output_dir=output_dir)
