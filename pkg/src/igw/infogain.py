"""Unsupervised per-channel diffusion-scale selection from KL-divergence
information curves.

For every graph and channel, the diffused signals P^t x_c are normalized
into probability vectors and compared (in relative entropy) against the
heavily smoothed state P^{t_J} x_c. Summing these divergences over graphs,
accumulating over t, and min-max rescaling yields one "information curve"
per channel; scales are read off the curve at the first crossings of a
quantile ladder, so consecutive wavelet bands capture roughly equal shares
of the total information lost to smoothing.

Everything here is deterministic: graphs may be processed by any number of
worker threads, but tables are reduced in a fixed pairwise tree keyed by
graph index, so a fit is a pure function of (dataset order, config).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .diffusion import diffuse_stack, lazy_random_walk
from .errors import (
    AllChannelsUninformative,
    ConstantVector,
    DimensionMismatch,
    EmptyDataset,
    InvalidScale,
    MissingLabels,
    ShapeMismatch,
    UninformativeChannel,
)
from .graph import Graph
from .scales import ScaleSet

HALF_MIN_NONZERO = "half-min-nonzero"


@dataclass(frozen=True)
class InfoGainConfig:
    """Knobs of the scale-selection fit.

    zero_substitution is either the string "half-min-nonzero" (replace
    zeros with half the smallest positive entry; scale-free, the library
    default) or a positive constant such as 1e-2 (the usual choice for
    sparse one-hot features). quantiles are the cumulative-information
    levels whose first crossings become interior scales.
    """

    t_J: int = 16
    quantiles: tuple[float, ...] = (0.25, 0.5, 0.75)
    zero_substitution: str | float = HALF_MIN_NONZERO
    class_balance: bool = False
    uninformative_tolerance: float = 0.5
    sample_fraction: float = 1.0

    def __post_init__(self):
        if self.t_J < 3:
            raise InvalidScale(f"t_J must be >= 3, got {self.t_J}")
        q = tuple(float(v) for v in self.quantiles)
        object.__setattr__(self, "quantiles", q)
        if not q:
            raise InvalidScale("at least one quantile is required")
        if any(not 0.0 < v < 1.0 for v in q):
            raise InvalidScale(f"quantiles must lie in (0, 1): {q}")
        if any(b <= a for a, b in zip(q, q[1:])):
            raise InvalidScale(f"quantiles must be strictly increasing: {q}")
        zs = self.zero_substitution
        if isinstance(zs, str):
            if zs not in (HALF_MIN_NONZERO, "half-min"):
                raise InvalidScale(f"unknown zero substitution {zs!r}")
            object.__setattr__(self, "zero_substitution", HALF_MIN_NONZERO)
        else:
            zs = float(zs)
            if not zs > 0.0:
                raise InvalidScale("constant zero substitution must be > 0")
            object.__setattr__(self, "zero_substitution", zs)
        if not 0.0 < self.sample_fraction <= 1.0:
            raise InvalidScale("sample_fraction must be in (0, 1]")
        if not 0.0 <= self.uninformative_tolerance < 1.0:
            raise InvalidScale("uninformative_tolerance must be in [0, 1)")

    @classmethod
    def from_quantile_interval(cls, interval: float, **kwargs) -> "InfoGainConfig":
        """Build the ladder (h, 2h, ..., 1 - h) from a stride h, e.g.
        1/4 -> (0.25, 0.5, 0.75)."""
        m = int(round(1.0 / interval)) - 1
        if m < 1:
            raise InvalidScale(f"quantile interval {interval} leaves no quantiles")
        return cls(quantiles=tuple(float(k * interval) for k in range(1, m + 1)),
                   **kwargs)


# -- per-graph computation ---------------------------------------------------

def normalize_channel(v: np.ndarray,
                      zero_substitution: str | float = HALF_MIN_NONZERO) -> np.ndarray:
    """Turn a signal vector into a strictly positive probability vector.

    Min-max scale to [0, 1], replace the exact zeros (KL cannot process
    them), then l1-normalize. Raises ConstantVector when max equals min,
    which signals an uninformative channel at this diffusion time.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or len(v) < 2:
        raise DimensionMismatch("expected a vector of length >= 2")
    if not np.all(np.isfinite(v)):
        raise DimensionMismatch("signal contains non-finite entries")
    lo, hi = v.min(), v.max()
    if hi == lo:
        raise ConstantVector("min-max scaling undefined on a constant vector")
    u = (v - lo) / (hi - lo)
    zeros = u == 0.0
    if isinstance(zero_substitution, str):
        u[zeros] = 0.5 * u[~zeros].min() if np.any(~zeros) else 1.0
    else:
        u[zeros] = float(zero_substitution)
    return u / u.sum()


def kl_divergence(p: np.ndarray, q: np.ndarray) -> float:
    """Relative entropy sum_k p_k log(p_k / q_k) in nats.

    Both inputs must be strictly positive distributions of equal length.
    Non-negative by Gibbs' inequality; zero iff p == q.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise DimensionMismatch(f"shapes differ: {p.shape} vs {q.shape}")
    if np.any(p <= 0.0) or np.any(q <= 0.0):
        raise ConstantVector("KL divergence needs strictly positive inputs")
    return float(np.sum(p * np.log(p / q)))


@dataclass(frozen=True)
class DivergenceTable:
    """KL divergences indexed (t, c) for t = 2..t_J.

    values[t - 2, c] = D_KL(q_c^t || q_c^{t_J}); the last row is
    identically zero. marked flags channels whose reference distribution
    at t_J could not be formed (constant signal) on this graph.
    """

    t_J: int
    values: np.ndarray
    marked: np.ndarray | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape[0] != self.t_J - 1:
            raise ShapeMismatch(
                f"expected {self.t_J - 1} rows for t = 2..{self.t_J}, got {vals.shape[0]}")
        object.__setattr__(self, "values", vals)

    @property
    def t_values(self) -> np.ndarray:
        return np.arange(2, self.t_J + 1)

    @property
    def n_channels(self) -> int:
        return self.values.shape[1]


def per_graph_divergences(graph: Graph, config: InfoGainConfig) -> DivergenceTable:
    """Diffuse one graph's features to t_J and tabulate divergences against
    the smooth reference.

    A channel whose reference at t_J is constant gets a zero sentinel row
    and an uninformative mark; a constant signal at some earlier t (with a
    valid reference) contributes zero at that t only.
    """
    if graph.n_channels < 1:
        raise DimensionMismatch("graph has no feature channels")
    op = lazy_random_walk(graph)
    stack = diffuse_stack(op, graph.features, config.t_J)
    t_J = config.t_J
    C = graph.n_channels
    values = np.zeros((t_J - 1, C))
    marked = np.zeros(C, dtype=bool)
    for c in range(C):
        try:
            ref = normalize_channel(stack.frame(t_J)[:, c], config.zero_substitution)
        except ConstantVector:
            marked[c] = True
            continue
        for t in range(2, t_J + 1):
            try:
                q = normalize_channel(stack.frame(t)[:, c], config.zero_substitution)
            except ConstantVector:
                continue
            values[t - 2, c] = kl_divergence(q, ref)
    return DivergenceTable(t_J, values, marked)


# -- aggregation across graphs ------------------------------------------------

def class_balance_weights(labels: np.ndarray) -> np.ndarray:
    """Inverse class-frequency weights normalized to mean one:
    w_i = N / (K * count(class(i)))."""
    labels = np.asarray(labels)
    classes, counts = np.unique(labels, return_counts=True)
    count_of = dict(zip(classes.tolist(), counts.tolist()))
    n, k = len(labels), len(classes)
    return np.array([n / (k * count_of[int(lbl)]) for lbl in labels])


def _tree_sum(arrays: list[np.ndarray]) -> np.ndarray:
    """Pairwise summation in a fixed tree keyed by list position."""
    if len(arrays) == 1:
        return arrays[0]
    mid = len(arrays) // 2
    return _tree_sum(arrays[:mid]) + _tree_sum(arrays[mid:])


def aggregate_divergences(tables: Sequence[DivergenceTable],
                          labels: Sequence[int] | None = None,
                          class_balance: bool = False) -> DivergenceTable:
    """Sum per-graph tables (optionally re-weighted for class imbalance)
    into one totals table. Summation order is fixed by table position."""
    if not tables:
        raise EmptyDataset("no divergence tables to aggregate")
    t_J = tables[0].t_J
    shape = tables[0].values.shape
    for tab in tables:
        if tab.t_J != t_J or tab.values.shape != shape:
            raise ShapeMismatch("divergence tables do not share a shape")
    if class_balance:
        if labels is None:
            raise MissingLabels("class balancing needs graph labels")
        if len(labels) != len(tables):
            raise ShapeMismatch("labels length does not match table count")
        weights = class_balance_weights(np.asarray(labels))
    else:
        weights = np.ones(len(tables))
    totals = _tree_sum([w * tab.values for w, tab in zip(weights, tables)])
    return DivergenceTable(t_J, totals)


# -- curves and selection ------------------------------------------------------

@dataclass(frozen=True)
class InformationCurve:
    """Cumulative divergence sums for one channel over t = 2..t_J - 1,
    raw and min-max rescaled to [0, 1]. An uninformative flag replaces the
    rescaled curve with zeros."""

    channel: int
    t_J: int
    raw_cumsum: np.ndarray
    rescaled: np.ndarray
    uninformative: bool = False

    @property
    def t_values(self) -> np.ndarray:
        return np.arange(2, self.t_J)


def cumulative_information(totals: DivergenceTable) -> list[InformationCurve]:
    """Accumulate totals over t and rescale each channel's curve to [0, 1].

    A constant raw curve (zero spread) cannot be rescaled; the channel is
    flagged and its rescaled curve left as zeros.
    """
    t_J = totals.t_J
    n_curve = t_J - 2
    values = totals.values[:n_curve]
    raw = np.cumsum(values, axis=0)
    curves = []
    for c in range(totals.n_channels):
        col = raw[:, c]
        span = col[-1] - col[0]
        if n_curve < 2 or span <= 0.0:
            curves.append(InformationCurve(c, t_J, col, np.zeros_like(col),
                                           uninformative=True))
        else:
            curves.append(InformationCurve(c, t_J, col, (col - col[0]) / span))
    return curves


def select_scales(curve: InformationCurve, quantiles: Sequence[float],
                  t_J: int) -> ScaleSet:
    """Read interior scales off a rescaled curve by first quantile crossing.

    For each quantile rho, the scale is the smallest t in [2, t_J - 1] with
    rescaled(t) >= rho (closed inequality, so a crossing always exists for
    rho <= 1). The fixed prefix (0, 1, 2) and suffix t_J are attached;
    duplicates are kept and turn into zero bands downstream.
    """
    if curve.uninformative:
        raise UninformativeChannel(f"channel {curve.channel} has no usable curve")
    if t_J != curve.t_J:
        raise ShapeMismatch("t_J does not match the curve")
    interior = []
    for rho in quantiles:
        idx = int(np.argmax(curve.rescaled >= rho))
        if not curve.rescaled[idx] >= rho:
            raise InvalidScale(f"no crossing for quantile {rho}")
        interior.append(idx + 2)
    return ScaleSet((0, 1, 2, *interior, t_J))


def median_scales(scale_sets: Sequence[ScaleSet | None],
                  uninformative: Sequence[bool] | None = None) -> ScaleSet:
    """Positionwise median scale set across informative channels.

    Even-count medians round to the nearest integer with ties toward the
    smaller scale. The (0, 1, 2) prefix and t_J suffix survive unchanged
    because they are shared by every input.
    """
    if uninformative is None:
        uninformative = [s is None for s in scale_sets]
    kept = [s for s, bad in zip(scale_sets, uninformative) if not bad]
    if not kept:
        raise AllChannelsUninformative("no informative channel to take medians over")
    lengths = {len(s) for s in kept}
    if len(lengths) != 1:
        raise ShapeMismatch("scale sets have differing lengths")
    stacked = np.array([s.scales for s in kept], dtype=np.float64)
    med = np.median(stacked, axis=0)
    rounded = np.ceil(med - 0.5).astype(int)  # ties toward the smaller scale
    return ScaleSet(tuple(rounded))


# -- the fitted model ----------------------------------------------------------

@dataclass(frozen=True)
class InfoGainModel:
    """Fitted per-channel scale sets, the uninformative-channel mask, the
    information curves behind them, and the fit configuration."""

    config: InfoGainConfig
    per_channel_scales: tuple[ScaleSet | None, ...]
    uninformative: np.ndarray
    curves: tuple[InformationCurve, ...]

    @property
    def n_channels(self) -> int:
        return len(self.per_channel_scales)

    def informative_channels(self) -> list[int]:
        return [c for c in range(self.n_channels) if not self.uninformative[c]]

    def median_scales(self) -> ScaleSet:
        return median_scales(self.per_channel_scales, self.uninformative)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "config": {
                "t_J": self.config.t_J,
                "quantiles": list(self.config.quantiles),
                "zero_substitution": self.config.zero_substitution,
                "class_balance": self.config.class_balance,
                "uninformative_tolerance": self.config.uninformative_tolerance,
                "sample_fraction": self.config.sample_fraction,
            },
            "per_channel_scales": [None if s is None else list(s.scales)
                                   for s in self.per_channel_scales],
            "uninformative_mask": [bool(b) for b in self.uninformative],
            "curves": [
                {
                    "channel": cv.channel,
                    "raw_cumsum": cv.raw_cumsum.tolist(),
                    "rescaled": cv.rescaled.tolist(),
                    "uninformative": bool(cv.uninformative),
                }
                for cv in self.curves
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "InfoGainModel":
        cfg = doc["config"]
        config = InfoGainConfig(
            t_J=int(cfg["t_J"]),
            quantiles=tuple(cfg["quantiles"]),
            zero_substitution=(cfg["zero_substitution"]
                               if isinstance(cfg["zero_substitution"], str)
                               else float(cfg["zero_substitution"])),
            class_balance=bool(cfg["class_balance"]),
            uninformative_tolerance=float(cfg["uninformative_tolerance"]),
            sample_fraction=float(cfg["sample_fraction"]),
        )
        scales = tuple(None if s is None else ScaleSet(tuple(s))
                       for s in doc["per_channel_scales"])
        mask = np.array(doc["uninformative_mask"], dtype=bool)
        curves = tuple(
            InformationCurve(
                channel=int(cv["channel"]),
                t_J=config.t_J,
                raw_cumsum=np.array(cv["raw_cumsum"]),
                rescaled=np.array(cv["rescaled"]),
                uninformative=bool(cv["uninformative"]),
            )
            for cv in doc["curves"]
        )
        return cls(config, scales, mask, curves)


def sample_indices(n: int, fraction: float) -> np.ndarray:
    """Deterministic, evenly spread subset of graph indices."""
    k = max(1, int(np.ceil(fraction * n)))
    return np.unique(np.round(np.linspace(0, n - 1, num=k)).astype(np.int64))


def fit(dataset, config: InfoGainConfig, workers: int | None = None) -> InfoGainModel:
    """Run the full selection procedure over a dataset.

    Graph tables may be computed by a thread pool (workers > 1); results
    are keyed by graph index and reduced in a fixed order, so the fitted
    model is identical for any worker count. A channel is masked when its
    reference fails on more than the tolerated fraction of fitted graphs
    or its aggregated curve is degenerate; with a single-graph dataset the
    aggregation is the identity.
    """
    graphs = list(dataset.graphs)
    if not graphs:
        raise EmptyDataset("cannot fit on an empty dataset")
    idx = sample_indices(len(graphs), config.sample_fraction)
    chosen = [graphs[i] for i in idx]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tables = list(pool.map(lambda g: per_graph_divergences(g, config), chosen))
    else:
        tables = [per_graph_divergences(g, config) for g in chosen]

    labels = None
    if config.class_balance:
        if getattr(dataset, "labels", None) is None:
            raise MissingLabels("class balancing needs a labeled dataset")
        labels = np.asarray(dataset.labels)[idx]
    totals = aggregate_divergences(tables, labels, config.class_balance)

    mark_fraction = np.mean([t.marked for t in tables], axis=0)
    curves = cumulative_information(totals)
    mask = np.array([
        mark_fraction[c] > config.uninformative_tolerance or curves[c].uninformative
        for c in range(totals.n_channels)
    ])
    curves = [replace(cv, uninformative=bool(mask[cv.channel])) for cv in curves]
    if np.all(mask):
        raise AllChannelsUninformative("every channel was flagged uninformative")
    scales = tuple(
        None if mask[c] else select_scales(curves[c], config.quantiles, config.t_J)
        for c in range(totals.n_channels)
    )
    return InfoGainModel(config, scales, mask, tuple(curves))
