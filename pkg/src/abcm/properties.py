"""Desk-scale empirical checks of the models' limiting behaviors.

These analyses run over recorded trajectories: per-dyad confidence traces
and sampled effective-edge histories. They classify confidence limits,
locate monotonicity onsets, detect effective-graph fixation, and verify
that final effective edges stay inside final opinion clusters. Failures are
reported, not proven impossible; the asynchronous model's guarantees are
almost-sure statements that finite runs can only sample.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graphs import Graph
from .metrics import ClusterProfile


class LimitClass(enum.Enum):
    ZERO = "zero"
    ONE = "one"
    UNDETERMINED = "undetermined"


@dataclass
class ConfidenceTrace:
    """Sampled confidence values for one dyad, plus its final-cluster flag."""

    edge: int
    times: np.ndarray
    values: np.ndarray
    same_limit_cluster: bool

    def __post_init__(self):
        self.times = np.asarray(self.times)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have equal length")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("sample times must be strictly increasing")


@dataclass
class EffectiveGraphHistory:
    """Effective edge sets sampled at strictly increasing times."""

    times: np.ndarray
    edge_sets: list[frozenset[int]]

    def __post_init__(self):
        self.times = np.asarray(self.times)
        if len(self.edge_sets) != self.times.size:
            raise ValueError("one edge set per sample time required")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("sample times must be strictly increasing")
        self.edge_sets = [frozenset(int(e) for e in s) for s in self.edge_sets]


def classify_confidence_limit(trace: ConfidenceTrace, eps: float) -> LimitClass:
    """ZERO if the final sample is <= eps, ONE if >= 1-eps, else UNDETERMINED."""
    if not 0.0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 0.5), got {eps}")
    v = float(trace.values[-1])
    if v <= eps:
        return LimitClass.ZERO
    if v >= 1.0 - eps:
        return LimitClass.ONE
    return LimitClass.UNDETERMINED


def eventual_monotonicity_onset(trace: ConfidenceTrace, strict: bool = True,
                                saturation_eps: float = 1e-12) -> Optional[float]:
    """Earliest sampled time from which the remaining samples are monotone.

    Synchronous-model traces are held to strict monotonicity, asynchronous
    ones to weak (pass strict=False). Under strict mode, consecutive equal
    samples within saturation_eps of the absorbing endpoints 0 and 1 do not
    break monotonicity: at double precision a bound pinned against an
    endpoint stops moving even though the exact sequence still would.
    Returns None when no suffix of at least two samples is monotone.
    """
    v = trace.values
    if v.size < 2:
        raise ValueError("trace needs at least 2 samples")
    diffs = np.diff(v)
    if strict:
        saturated = (diffs == 0.0) & ((v[:-1] <= saturation_eps)
                                      | (v[:-1] >= 1.0 - saturation_eps))
        inc_ok = (diffs > 0.0) | saturated
        dec_ok = (diffs < 0.0) | saturated
    else:
        inc_ok = diffs >= 0.0
        dec_ok = diffs <= 0.0
    onset_idx = min(_suffix_start(inc_ok), _suffix_start(dec_ok))
    if onset_idx > v.size - 2:
        return None
    return trace.times[onset_idx]


def _suffix_start(ok: np.ndarray) -> int:
    """Smallest s such that ok[s:] is all true (len(ok) if the last entry fails)."""
    bad = np.flatnonzero(~ok)
    return 0 if bad.size == 0 else int(bad[-1]) + 1


def effective_graph_fixation(history: EffectiveGraphHistory) -> Optional[float]:
    """Earliest sampled time after which the effective edge set never changes.

    None when the set still changes at the final sample, since the data then
    contains no stable suffix to witness fixation.
    """
    sets = history.edge_sets
    if not sets:
        raise ValueError("history needs at least 1 sample")
    if len(sets) == 1:
        return history.times[0]
    last_change = -1
    for k in range(len(sets) - 1):
        if sets[k] != sets[k + 1]:
            last_change = k
    if last_change == -1:
        return history.times[0]
    if last_change == len(sets) - 2:
        return None
    return history.times[last_change + 1]


def cross_cluster_edge_check(history: EffectiveGraphHistory,
                             final_profile: ClusterProfile,
                             g: Graph) -> bool:
    """True iff no settled effective edge joins two different final clusters.

    Checks every sampled edge set from the fixation time onward when fixation
    exists, and only the final sampled set otherwise.
    """
    fixation = effective_graph_fixation(history)
    if fixation is None:
        sets_to_check: Sequence[frozenset[int]] = [history.edge_sets[-1]]
    else:
        start = int(np.searchsorted(history.times, fixation))
        sets_to_check = history.edge_sets[start:]
    labels = final_profile.assignment
    for edge_set in sets_to_check:
        for e in edge_set:
            if labels[g.edge_src[e]] != labels[g.edge_dst[e]]:
                return False
    return True
