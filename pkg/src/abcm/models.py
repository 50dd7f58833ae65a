"""State containers and single-step updates for both opinion models.

Interaction rule (both models): a dyad (i, j) interacts at time t iff
|x_i(t) - x_j(t)| < c_ij(t), with STRICT inequality everywhere, including
the exact-tie case. Node i always counts itself in its synchronous-update
neighborhood; there is no c_ii.

Confidence rule (both models): an interacting dyad's bound moves to
c + gamma*(1 - c); a non-interacting one decays to delta*c. Both branches
preserve [0, 1]. With (gamma, delta) = (0, 1) the bounds are bitwise frozen,
which is what reduces the adaptive models to the fixed-bound baselines.

Normative arithmetic: synchronous means are accumulated sequentially in
ascending node-id order with self included at its sorted position, then
divided by the member count. The baseline oracles below repeat this order
independently so the (0, 1) reduction is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .graphs import Graph

HK = "HK"
DW = "DW"


@dataclass(frozen=True)
class ModelParams:
    """Model parameter set: kind, gamma, delta, c0, and mu (DW only)."""

    kind: str
    gamma: float
    delta: float
    c0: float
    mu: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (HK, DW):
            raise ValueError(f"kind must be {HK!r} or {DW!r}, got {self.kind!r}")
        for name in ("gamma", "delta", "c0"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.kind == DW:
            if self.mu is None:
                raise ValueError("mu is required for the DW model")
            if not 0.0 < self.mu <= 0.5:
                raise ValueError(f"mu must lie in (0, 0.5], got {self.mu}")


@dataclass
class SimState:
    """Opinions (length N) plus one confidence bound per unordered dyad."""

    t: int
    opinions: np.ndarray
    confidence: np.ndarray

    def copy(self) -> "SimState":
        return SimState(self.t, self.opinions.copy(), self.confidence.copy())


@dataclass(frozen=True)
class StepRecord:
    """Outcome of one asynchronous step: which edge, and whether it interacted."""

    edge: int
    interacted: bool


def init_state(g: Graph, c0: float, opinions: np.ndarray) -> SimState:
    """Fresh state at t=0 with every dyadic bound set to c0."""
    if not 0.0 <= c0 <= 1.0:
        raise ValueError(f"c0 must lie in [0, 1], got {c0}")
    opinions = np.asarray(opinions, dtype=np.float64)
    if opinions.shape != (g.n,):
        raise ValueError(f"opinion vector must have length {g.n}, got shape {opinions.shape}")
    if opinions.size and (opinions.min() < 0.0 or opinions.max() > 1.0):
        raise ValueError("opinions must lie in [0, 1]")
    return SimState(t=0, opinions=opinions.copy(),
                    confidence=np.full(g.num_edges, float(c0)))


def confidence_update(c: float, interacted: bool, gamma: float, delta: float) -> float:
    """One dyad's bound after a step: c + gamma*(1-c) on interaction, delta*c otherwise."""
    if interacted:
        return c + gamma * (1.0 - c)
    return delta * c


def hk_step(state: SimState, g: Graph, params: ModelParams) -> SimState:
    """One fully synchronous round of the adaptive model.

    Every node replaces its opinion by the mean over itself and its in-bound
    neighbors, all read from the time-t snapshot; every edge's confidence
    bound updates from the same snapshot.
    """
    if params.kind != HK:
        raise ValueError(f"hk_step requires kind={HK!r}, got {params.kind!r}")
    x_out = np.empty_like(state.opinions)
    conf_out = np.empty_like(state.confidence)
    _kernels.hk_round(state.opinions, state.confidence,
                      g.nbr, g.nbr_edge, g.nbr_ptr,
                      g.edge_src, g.edge_dst,
                      params.gamma, params.delta, x_out, conf_out)
    return SimState(state.t + 1, x_out, conf_out)


def dw_step(state: SimState, g: Graph, params: ModelParams,
            rng: np.random.Generator) -> tuple[SimState, StepRecord]:
    """One asynchronous step: a uniformly random edge, compromise if in bound.

    Only the selected dyad's opinions (on interaction) and its single
    confidence entry change; one call advances t by 1.
    """
    if params.kind != DW:
        raise ValueError(f"dw_step requires kind={DW!r}, got {params.kind!r}")
    if g.num_edges == 0:
        raise ValueError("DW step requires a graph with at least one edge")
    e = int(rng.integers(0, g.num_edges))
    x = state.opinions.copy()
    conf = state.confidence.copy()
    record = _dw_apply(x, conf, g, e, params.mu, params.gamma, params.delta)
    return SimState(state.t + 1, x, conf), record


def _dw_apply(x: np.ndarray, conf: np.ndarray, g: Graph, e: int,
              mu: float, gamma: float, delta: float) -> StepRecord:
    """Shared in-place asynchronous update for edge e; same arithmetic as the kernel."""
    i = int(g.edge_src[e])
    j = int(g.edge_dst[e])
    d = abs(x[i] - x[j])
    c = conf[e]
    if d < c:
        xi = x[i]
        xj = x[j]
        x[i] = xi + mu * (xj - xi)
        x[j] = xj + mu * (xi - xj)
        conf[e] = c + gamma * (1.0 - c)
        return StepRecord(edge=e, interacted=True)
    conf[e] = delta * c
    return StepRecord(edge=e, interacted=False)


def baseline_hk_step(state: SimState, g: Graph, params: ModelParams) -> SimState:
    """Fixed-bound synchronous round: independent oracle for the (0,1) reduction.

    Membership uses the scalar params.c0 for every dyad; confidence bounds
    pass through untouched. Accumulation follows the normative order from
    the module docstring.
    """
    if params.kind != HK:
        raise ValueError(f"baseline_hk_step requires kind={HK!r}, got {params.kind!r}")
    x = state.opinions
    c0 = params.c0
    x_out = np.empty_like(x)
    for i in range(g.n):
        xi = x[i]
        acc = 0.0
        cnt = 0
        placed = False
        for j in g.neighbors(i):
            if not placed and j > i:
                acc += xi
                cnt += 1
                placed = True
            if abs(xi - x[j]) < c0:
                acc += x[j]
                cnt += 1
        if not placed:
            acc += xi
            cnt += 1
        x_out[i] = acc / cnt
    return SimState(state.t + 1, x_out, state.confidence.copy())


def baseline_dw_step(state: SimState, g: Graph, params: ModelParams,
                     rng: np.random.Generator) -> tuple[SimState, StepRecord]:
    """Fixed-bound asynchronous step: independent oracle for the (0,1) reduction.

    Consumes the random source exactly like dw_step (one edge-id draw), tests
    the scalar params.c0, and leaves the confidence array untouched.
    """
    if params.kind != DW:
        raise ValueError(f"baseline_dw_step requires kind={DW!r}, got {params.kind!r}")
    if g.num_edges == 0:
        raise ValueError("DW step requires a graph with at least one edge")
    e = int(rng.integers(0, g.num_edges))
    x = state.opinions.copy()
    i = int(g.edge_src[e])
    j = int(g.edge_dst[e])
    interacted = abs(x[i] - x[j]) < params.c0
    if interacted:
        xi = x[i]
        xj = x[j]
        x[i] = xi + params.mu * (xj - xi)
        x[j] = xj + params.mu * (xi - xj)
    return (SimState(state.t + 1, x, state.confidence.copy()),
            StepRecord(edge=e, interacted=interacted))


def baseline_step(state: SimState, g: Graph, params: ModelParams,
                  rng: Optional[np.random.Generator] = None):
    """Dispatch to the fixed-bound oracle for either model kind."""
    if params.kind == HK:
        return baseline_hk_step(state, g, params)
    if rng is None:
        raise ValueError("baseline DW step requires a random source")
    return baseline_dw_step(state, g, params, rng)
