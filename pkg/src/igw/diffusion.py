"""Lazy random-walk diffusion: the operator P = (I + A D^-1) / 2 and
stacks of its powers applied to signal matrices.

P is column-stochastic (it acts on column signal vectors), so repeated
application conserves per-column mass. Powers are always computed by
recursive sparse matrix-vector products, never by matrix-matrix powering.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDegree, DimensionMismatch, InvalidScale
from .graph import Graph
from .sparse import SparseMatrix


@dataclass(frozen=True)
class DiffusionOperator:
    """The lazy walk matrix P, kept sparse. Every diagonal entry is >= 1/2
    and every column sums to one."""

    matrix: SparseMatrix

    @property
    def n(self) -> int:
        return self.matrix.n_rows

    def apply(self, x: np.ndarray) -> np.ndarray:
        """P @ x for a vector (n,) or matrix (n, C)."""
        return self.matrix.matmat(x)


def lazy_random_walk(graph: Graph) -> DiffusionOperator:
    """Build P = (I + A D^-1) / 2 from a graph's adjacency.

    A D^-1 scales each adjacency column by the inverse degree; the lazy
    half-identity then lands 1/2 on every diagonal entry (the adjacency
    diagonal is empty by construction).
    """
    degrees = graph.degrees()
    if np.any(degrees == 0):
        raise DegenerateDegree("graph has a zero-degree node")
    a = graph.adjacency
    n = graph.n_nodes
    walk = a.scale_columns(1.0 / degrees)
    rows = np.concatenate([walk._rows, np.arange(n, dtype=np.int64)])
    cols = np.concatenate([walk.col_idx, np.arange(n, dtype=np.int64)])
    vals = np.concatenate([0.5 * walk.values, np.full(n, 0.5)])
    return DiffusionOperator(SparseMatrix.from_coo(rows, cols, vals, (n, n)))


def apply(op: DiffusionOperator, x: np.ndarray) -> np.ndarray:
    """Module-level alias for op.apply(x)."""
    return op.apply(x)


@dataclass(frozen=True)
class DiffusionStack:
    """The sequence P^t X for t = 0..max_scale, all frames materialized.

    frames[0] is X itself; frames[t + 1] = P frames[t]. Frames are
    read-only n x C arrays.
    """

    frames: tuple[np.ndarray, ...]

    @property
    def max_scale(self) -> int:
        return len(self.frames) - 1

    @property
    def channels(self) -> int:
        return self.frames[0].shape[1]

    def frame(self, t: int) -> np.ndarray:
        if not 0 <= t <= self.max_scale:
            raise InvalidScale(f"t={t} outside stack range 0..{self.max_scale}")
        return self.frames[t]


def diffuse_stack(op: DiffusionOperator, x: np.ndarray, t_max: int) -> DiffusionStack:
    """Compute P^t X for t = 0..t_max by repeated application of P.

    Input may be a vector (treated as a single channel) or an n x C
    matrix; frames are stored as n x C.
    """
    if t_max < 2:
        raise InvalidScale(f"maximum scale must be >= 2, got {t_max}")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] != op.n:
        raise DimensionMismatch(
            f"signal has shape {x.shape}, operator expects ({op.n}, C)")
    frames = [x.copy()]
    for _ in range(t_max):
        frames.append(op.apply(frames[-1]))
    for f in frames:
        f.flags.writeable = False
    return DiffusionStack(tuple(frames))
