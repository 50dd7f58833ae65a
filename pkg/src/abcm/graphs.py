"""Undirected simple graphs: generators, LCC reduction, and edge-list I/O.

All graphs have dense integer node ids 0..n-1 and stable integer edge ids
0..m-1 (the index into the edge arrays). Edges are stored once per unordered
pair with endpoints normalized so that ``edge_src[e] < edge_dst[e]``.
Graphs are immutable after construction and safe to share across threads
and processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np


class EdgeListParseError(ValueError):
    """Raised for malformed edge-list input; message names the line number."""


class Graph:
    """Immutable undirected simple graph.

    Attributes
    ----------
    n : int
        Number of nodes.
    edge_src, edge_dst : int64 arrays of length m
        Edge endpoints, normalized so edge_src[e] < edge_dst[e]. The index
        into these arrays is the edge id.
    nbr, nbr_edge, nbr_ptr : int64 arrays
        CSR adjacency: the neighbors of node i are nbr[nbr_ptr[i]:nbr_ptr[i+1]]
        in ascending order, and nbr_edge holds the matching edge ids.
    """

    __slots__ = ("n", "edge_src", "edge_dst", "nbr", "nbr_edge", "nbr_ptr")

    def __init__(self, n: int, src: Iterable[int], dst: Iterable[int]):
        if n < 0:
            raise ValueError("node count must be nonnegative")
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if src.shape != dst.shape or src.ndim != 1:
            raise ValueError("edge endpoint arrays must be 1-D and equal length")
        if src.size:
            if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(src == dst):
                raise ValueError("self-edges are not allowed")
        lo = np.minimum(src, dst)
        hi = np.maximum(src, dst)
        key = lo * n + hi
        if np.unique(key).size != key.size:
            raise ValueError("duplicate edges are not allowed")
        self.n = int(n)
        self.edge_src = lo
        self.edge_dst = hi
        self.edge_src.setflags(write=False)
        self.edge_dst.setflags(write=False)
        self._build_csr()

    def _build_csr(self) -> None:
        m = self.edge_src.size
        owners = np.concatenate([self.edge_src, self.edge_dst])
        others = np.concatenate([self.edge_dst, self.edge_src])
        eids = np.concatenate([np.arange(m, dtype=np.int64)] * 2) if m else np.empty(0, np.int64)
        order = np.lexsort((others, owners))
        self.nbr = others[order]
        self.nbr_edge = eids[order]
        ptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(ptr, owners + 1, 1)
        self.nbr_ptr = np.cumsum(ptr)
        self.nbr.setflags(write=False)
        self.nbr_edge.setflags(write=False)
        self.nbr_ptr.setflags(write=False)

    @property
    def num_edges(self) -> int:
        return int(self.edge_src.size)

    def neighbors(self, i: int) -> np.ndarray:
        """Neighbors of node i in ascending order (read-only view)."""
        return self.nbr[self.nbr_ptr[i]:self.nbr_ptr[i + 1]]

    def incident_edges(self, i: int) -> np.ndarray:
        """Edge ids incident to node i, aligned with neighbors(i)."""
        return self.nbr_edge[self.nbr_ptr[i]:self.nbr_ptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.nbr_ptr)

    def edge_pairs(self) -> set[tuple[int, int]]:
        """Edge set as (i, j) tuples with i < j; for comparisons in tests."""
        return set(zip(self.edge_src.tolist(), self.edge_dst.tolist()))

    def __repr__(self) -> str:  # pragma: no cover
        return f"Graph(n={self.n}, m={self.num_edges})"


@dataclass(frozen=True)
class SbmSpec:
    """Two-block stochastic-block-model parameters.

    Block A holds round(frac_a * n) nodes (ids 0..|A|-1), block B the rest.
    """

    n: int
    frac_a: float
    p_aa: float
    p_bb: float
    p_ab: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0.0 < self.frac_a < 1.0:
            raise ValueError("frac_a must lie in (0, 1)")
        for name in ("p_aa", "p_bb", "p_ab"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    @property
    def size_a(self) -> int:
        return int(round(self.frac_a * self.n))


@dataclass
class LoadReport:
    """Metadata from load_edge_list: dedup count and the original node ids."""

    duplicates: int
    original_ids: np.ndarray  # original_ids[new_id] = id as it appeared in the file


def generate_complete(n: int) -> Graph:
    """Complete graph on n nodes (n >= 1), with n(n-1)/2 edges."""
    if n < 1:
        raise ValueError("n must be positive")
    src, dst = np.triu_indices(n, k=1)
    return Graph(n, src, dst)


def generate_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    """G(n, p) graph: each of the n(n-1)/2 pairs drawn independently.

    Connectivity is not enforced; compose with largest_connected_component
    when a connected sample is required.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    src, dst = np.triu_indices(n, k=1)
    keep = rng.random(src.size) < p
    return Graph(n, src[keep], dst[keep])


def generate_sbm(spec: SbmSpec, rng: np.random.Generator) -> tuple[Graph, np.ndarray]:
    """Two-block SBM sample. Returns (graph, blocks) with blocks[i] in {0, 1}."""
    n = spec.n
    blocks = np.zeros(n, dtype=np.int64)
    blocks[spec.size_a:] = 1
    src, dst = np.triu_indices(n, k=1)
    ba = blocks[src]
    bb = blocks[dst]
    prob = np.where(ba == bb, np.where(ba == 0, spec.p_aa, spec.p_bb), spec.p_ab)
    keep = rng.random(src.size) < prob
    return Graph(n, src[keep], dst[keep]), blocks


def largest_connected_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest component, nodes relabeled 0..m-1.

    Ties between equal-size components break toward the component containing
    the smallest original node id. Returns (subgraph, old_to_new) where
    old_to_new[i] is the new id of original node i, or -1 if dropped.
    Relabeling preserves the relative order of the original ids.
    """
    if g.n == 0:
        raise ValueError("graph has no nodes")
    labels = _component_labels(g.n, g.edge_src, g.edge_dst)
    sizes = np.bincount(labels)
    # labels are assigned in ascending order of first (= smallest) member id,
    # so the smallest label among the max-size components wins ties
    best = int(np.flatnonzero(sizes == sizes.max())[0])
    nodes = np.flatnonzero(labels == best)
    old_to_new = np.full(g.n, -1, dtype=np.int64)
    old_to_new[nodes] = np.arange(nodes.size, dtype=np.int64)
    keep = labels[g.edge_src] == best
    src = old_to_new[g.edge_src[keep]]
    dst = old_to_new[g.edge_dst[keep]]
    order = np.lexsort((dst, src))
    return Graph(nodes.size, src[order], dst[order]), old_to_new


def _component_labels(n: int, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Connected-component labels, ids ascending by smallest member node."""
    import scipy.sparse as sp
    from scipy.sparse.csgraph import connected_components

    mat = sp.coo_matrix((np.ones(src.size), (src, dst)), shape=(n, n))
    _, labels = connected_components(mat, directed=False)
    # canonicalize: relabel in order of first occurrence
    _, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first.size, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(first.size)
    return rank[inverse]


def load_edge_list(source: TextIO) -> tuple[Graph, LoadReport]:
    """Parse a whitespace-separated edge list.

    Each non-comment line holds two nonnegative integer node ids. Lines
    starting with '#' and blank lines are ignored. Duplicate edges (either
    orientation) collapse to one and are counted in the returned report.
    Node ids are compacted to dense 0..N-1 preserving numeric order.
    """
    pairs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    duplicates = 0
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListParseError(f"line {lineno}: expected 2 tokens, got {len(tokens)}")
        ids = []
        for tok in tokens:
            try:
                v = int(tok)
            except ValueError:
                raise EdgeListParseError(f"line {lineno}: non-integer node id {tok!r}") from None
            if v < 0:
                raise EdgeListParseError(f"line {lineno}: negative node id {v}")
            ids.append(v)
        a, b = ids
        if a == b:
            raise EdgeListParseError(f"line {lineno}: self-loop at node {a}")
        pair = (a, b) if a < b else (b, a)
        if pair in seen:
            duplicates += 1
            continue
        seen.add(pair)
        pairs.append(pair)
    if pairs:
        arr = np.array(pairs, dtype=np.int64)
        original_ids = np.unique(arr)
        remap = {int(v): k for k, v in enumerate(original_ids)}
        src = np.fromiter((remap[int(a)] for a, _ in pairs), dtype=np.int64, count=len(pairs))
        dst = np.fromiter((remap[int(b)] for _, b in pairs), dtype=np.int64, count=len(pairs))
    else:
        original_ids = np.empty(0, dtype=np.int64)
        src = dst = np.empty(0, dtype=np.int64)
    graph = Graph(int(original_ids.size), src, dst)
    return graph, LoadReport(duplicates=duplicates, original_ids=original_ids)


def write_edge_list(g: Graph, sink: TextIO) -> None:
    """Emit one "i j" line per edge with i < j, sorted lexicographically."""
    order = np.lexsort((g.edge_dst, g.edge_src))
    for i, j in zip(g.edge_src[order].tolist(), g.edge_dst[order].tolist()):
        sink.write(f"{i} {j}\n")
