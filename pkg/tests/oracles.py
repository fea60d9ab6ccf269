"""Independent reference implementations used only by the tests.

Everything here is deliberately naive: dense matrices, explicit matrix
powers, and scalar Python loops. Nothing imports the library's sparse
kernels or selection code, so agreement between the two is a real check,
not a tautology.
"""
from __future__ import annotations

import math

import numpy as np


def dense_adjacency(edges, n: int) -> np.ndarray:
    A = np.zeros((n, n))
    for i, j, w in edges:
        A[i, j] = w
        A[j, i] = w
    return A


def dense_lazy_walk(A: np.ndarray) -> np.ndarray:
    d = A.sum(axis=0)
    return 0.5 * (np.eye(len(A)) + A @ np.diag(1.0 / d))


def dense_power(P: np.ndarray, t: int) -> np.ndarray:
    return np.linalg.matrix_power(P, t)


def dense_wavelet_bands(P: np.ndarray, X: np.ndarray, scales):
    """Difference-of-matrix-powers bands plus the final low-pass."""
    powers = {t: dense_power(P, t) for t in set(scales)}
    bands = [(powers[a] - powers[b]) @ X for a, b in zip(scales[:-1], scales[1:])]
    return bands, powers[scales[-1]] @ X


def dense_legs_bands(P: np.ndarray, X: np.ndarray, F: np.ndarray):
    """Brute-force selector-matrix bands: band 0 = X - sum_t F[0,t] P^t X,
    middle bands are consecutive mixture differences, last is the final
    row's mixture."""
    J, t_max = F.shape
    mixtures = []
    for j in range(J):
        S = np.zeros_like(X)
        for t in range(1, t_max + 1):
            S += F[j, t - 1] * (dense_power(P, t) @ X)
        mixtures.append(S)
    bands = [X - mixtures[0]]
    for j in range(J - 1):
        bands.append(mixtures[j] - mixtures[j + 1])
    bands.append(mixtures[J - 1])
    return bands


# -- scalar reference for the scale-selection pipeline -----------------------

def scalar_normalize(v, zero_substitution):
    """Min-max, zero substitution, l1 norm; None signals a constant input."""
    v = [float(x) for x in v]
    lo, hi = min(v), max(v)
    if hi == lo:
        return None
    u = [(x - lo) / (hi - lo) for x in v]
    if zero_substitution == "half-min-nonzero":
        sub = 0.5 * min(x for x in u if x > 0)
    else:
        sub = float(zero_substitution)
    u = [sub if x == 0 else x for x in u]
    s = sum(u)
    return [x / s for x in u]


def scalar_kl(p, q) -> float:
    return sum(pi * math.log(pi / qi) for pi, qi in zip(p, q))


def reference_divergence_table(edges, n, X, t_J, zero_substitution):
    """Per-graph divergences via dense matrix powers and scalar loops.
    Returns (values, marked) like the library's table."""
    P = dense_lazy_walk(dense_adjacency(edges, n))
    C = X.shape[1]
    values = np.zeros((t_J - 1, C))
    marked = [False] * C
    for c in range(C):
        ref = scalar_normalize(dense_power(P, t_J) @ X[:, c], zero_substitution)
        if ref is None:
            marked[c] = True
            continue
        for t in range(2, t_J + 1):
            q = scalar_normalize(dense_power(P, t) @ X[:, c], zero_substitution)
            if q is None:
                continue
            values[t - 2, c] = scalar_kl(q, ref)
    return values, marked


def reference_fit(graph_specs, labels, t_J, quantiles, zero_substitution,
                  class_balance=False):
    """End-to-end naive selection: returns (raw curves, rescaled curves,
    per-channel scale tuples or None, uninformative flags)."""
    tables = [reference_divergence_table(e, n, X, t_J, zero_substitution)
              for e, n, X in graph_specs]
    n_graphs = len(tables)
    C = tables[0][0].shape[1]
    if class_balance:
        classes = sorted(set(labels))
        counts = {c: sum(1 for l in labels if l == c) for c in classes}
        weights = [n_graphs / (len(classes) * counts[l]) for l in labels]
    else:
        weights = [1.0] * n_graphs
    totals = np.zeros((t_J - 1, C))
    for w, (vals, _) in zip(weights, tables):
        totals += w * vals
    mark_fraction = [sum(t[1][c] for t in tables) / n_graphs for c in range(C)]

    raws, rescaleds, scale_sets, flags = [], [], [], []
    for c in range(C):
        raw = []
        acc = 0.0
        for t in range(2, t_J):
            acc += totals[t - 2, c]
            raw.append(acc)
        span = raw[-1] - raw[0]
        degenerate = len(raw) < 2 or span <= 0
        flagged = degenerate or mark_fraction[c] > 0.5
        if flagged:
            rescaled = [0.0] * len(raw)
            scales = None
        else:
            rescaled = [(x - raw[0]) / span for x in raw]
            interior = []
            for rho in quantiles:
                for t in range(2, t_J):
                    if rescaled[t - 2] >= rho:
                        interior.append(t)
                        break
            scales = (0, 1, 2, *interior, t_J)
        raws.append(raw)
        rescaleds.append(rescaled)
        scale_sets.append(scales)
        flags.append(flagged)
    return raws, rescaleds, scale_sets, flags
