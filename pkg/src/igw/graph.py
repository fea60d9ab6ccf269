"""Undirected weighted graphs with node feature matrices."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    InconsistentEdge,
    IndexOutOfRange,
    IsolatedNode,
    NonPositiveWeight,
    SelfLoopEdge,
)
from .sparse import SparseMatrix


@dataclass(frozen=True)
class Graph:
    """A connected-enough graph: symmetric non-negative adjacency, no
    self-loops, every node with positive degree, plus an n x C feature
    matrix and an optional class label."""

    n_nodes: int
    adjacency: SparseMatrix
    features: np.ndarray
    label: int | None = None

    def __post_init__(self):
        feats = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        if feats.ndim != 2 or feats.shape[0] != self.n_nodes:
            raise DimensionMismatch(
                f"features must be ({self.n_nodes}, C), got {feats.shape}")
        feats.flags.writeable = False
        object.__setattr__(self, "features", feats)
        if self.adjacency.shape != (self.n_nodes, self.n_nodes):
            raise DimensionMismatch("adjacency shape does not match n_nodes")

    @property
    def n_channels(self) -> int:
        return self.features.shape[1]

    @property
    def n_edges(self) -> int:
        """Undirected edge count (each stored twice in the CSR)."""
        return self.adjacency.nnz // 2

    def degrees(self) -> np.ndarray:
        return self.adjacency.row_sums()

    def permute(self, perm: np.ndarray) -> "Graph":
        """Relabel nodes: new index perm[i] corresponds to old index i."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(self.n_nodes)
        a = self.adjacency
        adj = SparseMatrix.from_coo(perm[a._rows], perm[a.col_idx], a.values,
                                    (self.n_nodes, self.n_nodes))
        return Graph(self.n_nodes, adj, self.features[inv], self.label)


def build_graph(edges, n_nodes: int, features=None, label: int | None = None) -> Graph:
    """Assemble a Graph from an undirected edge list.

    Each edge is (i, j, weight) with i != j and weight > 0. An edge may be
    listed once or in both directions; duplicates collapse, but the same
    pair with conflicting weights is rejected. Isolated nodes are rejected
    because the random-walk normalization needs every degree positive.
    """
    if features is None:
        features = np.ones((n_nodes, 1))
    pair_weight: dict[tuple[int, int], float] = {}
    for i, j, w in edges:
        i, j, w = int(i), int(j), float(w)
        if not (0 <= i < n_nodes and 0 <= j < n_nodes):
            raise IndexOutOfRange(f"edge ({i}, {j}) outside [0, {n_nodes})")
        if i == j:
            raise SelfLoopEdge(f"self-loop at node {i}")
        if w <= 0:
            raise NonPositiveWeight(f"edge ({i}, {j}) has weight {w}")
        key = (i, j) if i < j else (j, i)
        prev = pair_weight.get(key)
        if prev is None:
            pair_weight[key] = w
        elif prev != w:
            raise InconsistentEdge(f"edge {key} given with weights {prev} and {w}")
    rows, cols, vals = [], [], []
    for (i, j), w in pair_weight.items():
        rows += [i, j]
        cols += [j, i]
        vals += [w, w]
    adjacency = SparseMatrix.from_coo(rows, cols, vals, (n_nodes, n_nodes))
    degrees = adjacency.row_sums()
    if np.any(degrees == 0):
        bad = int(np.flatnonzero(degrees == 0)[0])
        raise IsolatedNode(f"node {bad} has no incident edge")
    return Graph(n_nodes, adjacency, features, label)
