"""Effective graph, opinion clusters, convergence test, and summary statistics.

The effective graph at time t keeps exactly the edges whose current opinion
difference is strictly below their current confidence bound. Opinion
clusters are its connected components; cluster ids are assigned in order of
each cluster's smallest member node, so output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph, _component_labels
from .models import SimState


@dataclass
class ClusterProfile:
    """Partition of nodes into opinion clusters with per-cluster edge tallies.

    internal_edges_original[r] counts original-graph edges inside cluster r;
    internal_edges_effective[r] counts the surviving effective edges. A
    cluster has internal_edges_original == 0 iff it is a singleton.
    """

    assignment: np.ndarray
    sizes: np.ndarray
    internal_edges_original: np.ndarray
    internal_edges_effective: np.ndarray

    @property
    def n_clusters(self) -> int:
        return int(self.sizes.size)


def effective_edges(state: SimState, g: Graph) -> np.ndarray:
    """Edge ids with |x_i - x_j| < c_ij at the state's current time (ascending)."""
    diff = np.abs(state.opinions[g.edge_src] - state.opinions[g.edge_dst])
    return np.flatnonzero(diff < state.confidence)


def opinion_clusters(state: SimState, g: Graph) -> ClusterProfile:
    """Connected components of the effective graph, with edge tallies."""
    eff = effective_edges(state, g)
    labels = _component_labels(g.n, g.edge_src[eff], g.edge_dst[eff])
    r = int(labels.max()) + 1 if labels.size else 0
    sizes = np.bincount(labels, minlength=r)
    same = labels[g.edge_src] == labels[g.edge_dst]
    internal_orig = np.bincount(labels[g.edge_src[same]], minlength=r)
    # effective edges join same-cluster endpoints by construction
    internal_eff = np.bincount(labels[g.edge_src[eff]], minlength=r)
    return ClusterProfile(assignment=labels, sizes=sizes,
                          internal_edges_original=internal_orig,
                          internal_edges_effective=internal_eff)


def classify_clusters(profile: ClusterProfile, n: int) -> tuple[int, int]:
    """(major, minor) counts: major iff a cluster holds strictly more than 1% of n.

    The comparison is exact integer arithmetic (100*size > n), so boundary
    sizes are never misclassified by float rounding.
    """
    if int(profile.sizes.sum()) != n:
        raise ValueError("cluster sizes must sum to the node count")
    major = int(np.count_nonzero(100 * profile.sizes > n))
    return major, int(profile.sizes.size - major)


def shannon_entropy(profile: ClusterProfile, n: int) -> float:
    """Entropy (natural log) of the cluster-size distribution; 0 for one cluster."""
    sizes = profile.sizes
    if sizes.size == 0 or int(sizes.sum()) != n:
        raise ValueError("cluster sizes must be positive and sum to the node count")
    p = sizes / n
    return float(-(p * np.log(p)).sum()) + 0.0  # normalize -0.0


def weighted_edge_fraction(profile: ClusterProfile, n: int) -> tuple[float, bool]:
    """Cluster-size-weighted fraction of original internal edges kept effective.

    Singleton clusters (no internal edges) are excluded and their node count
    is removed from the normalization. Returns (value, all_isolated); when
    every node is isolated in the effective graph the value is the sentinel
    0.0 with the flag set. Computed as sum(size_r * ratio_r) / (n - l) so the
    all-edges-kept case yields exactly 1.0.
    """
    isolated = profile.internal_edges_original == 0
    n_isolated = int(profile.sizes[isolated].sum())
    if n_isolated == n:
        return 0.0, True
    keep = ~isolated
    ratios = (profile.internal_edges_effective[keep]
              / profile.internal_edges_original[keep])
    num = float((profile.sizes[keep] * ratios).sum())
    return num / (n - n_isolated), False


def cluster_spreads(profile: ClusterProfile, opinions: np.ndarray) -> np.ndarray:
    """Per-cluster max-minus-min opinion spread (0 for singletons)."""
    r = profile.n_clusters
    mx = np.full(r, -np.inf)
    mn = np.full(r, np.inf)
    np.maximum.at(mx, profile.assignment, opinions)
    np.minimum.at(mn, profile.assignment, opinions)
    return mx - mn


def converged(state: SimState, g: Graph, tolerance: float) -> bool:
    """True iff every effective-graph cluster's opinion spread is below tolerance."""
    if tolerance <= 0.0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    profile = opinion_clusters(state, g)
    if profile.n_clusters == 0:
        return True
    return float(cluster_spreads(profile, state.opinions).max()) < tolerance
