"""Dataset-level scattering feature extraction under three scale sources:
fixed dyadic scales, fitted per-channel scales, and one-hot selector-matrix
wavelets.

Per-channel scale sets are applied channel-wise: each channel is diffused
and banded under its own set, uninformative channels are dropped, and the
per-channel blocks are concatenated. Duplicate selected scales produce
exact-zero bands which are retained by default, so the feature matrix
stays rectangular across graphs; an opt-in flag drops them (the dropped
layout is still shared by all graphs, since scale sets are per-channel,
not per-graph).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import GraphDataset
from .diffusion import diffuse_stack, lazy_random_walk
from .errors import AllChannelsUninformative, InvalidScale
from .graph import Graph
from .infogain import InfoGainModel
from .legs import SelectorMatrix, legs_wavelets, one_hot_theta, selector_matrix
from .scales import ScaleSet
from .wavelets import (
    ScatteringFeatures,
    _cascade,
    get_activation,
    pool_scattering,
    scattering,
)


@dataclass(frozen=True)
class ScatteringConfig:
    order: int = 2
    moments: int = 4
    include_lowpass: bool = True
    activation: str = "abs"
    drop_zero_bands: bool = False

    def __post_init__(self):
        if self.order not in (1, 2):
            raise InvalidScale(f"scattering order must be 1 or 2, got {self.order}")
        if self.moments < 1:
            raise InvalidScale("moment count must be >= 1")
        get_activation(self.activation)


# -- scale plans -----------------------------------------------------------

@dataclass(frozen=True)
class SharedScalesPlan:
    """One scale set for every channel (dyadic or any fixed set)."""

    scales: ScaleSet


@dataclass(frozen=True)
class PerChannelPlan:
    """Fitted per-channel scale sets; None entries are dropped channels."""

    scales: tuple[ScaleSet | None, ...]

    @classmethod
    def from_model(cls, model: InfoGainModel) -> "PerChannelPlan":
        return cls(model.per_channel_scales)


@dataclass(frozen=True)
class LegsOneHotPlan:
    """Selector-matrix wavelets with exact one-hot rows at fixed scales."""

    scales: ScaleSet

    def selector(self) -> SelectorMatrix:
        return selector_matrix(one_hot_theta(self.scales, magnitude=1.0),
                               softmax_enabled=False)


ScalePlan = SharedScalesPlan | PerChannelPlan | LegsOneHotPlan


def _zero_band_indices(scales: ScaleSet) -> set[int]:
    return {j for j, (a, b) in enumerate(scales.band_pairs()) if a == b}


def _filter_zero_paths(features: ScatteringFeatures,
                       zero_bands: set[int]) -> ScatteringFeatures:
    if not zero_bands:
        return features
    keep = []
    for k, label in enumerate(features.layout):
        parts = label.split(".")
        bands = [int(p[1:]) for p in parts if p.startswith("b")]
        if not any(b in zero_bands for b in bands):
            keep.append(k)
    return ScatteringFeatures(features.vector[keep],
                              tuple(features.layout[k] for k in keep))


def graph_features(graph: Graph, plan: ScalePlan,
                   cfg: ScatteringConfig) -> ScatteringFeatures:
    """Pooled scattering features of one graph under a scale plan."""
    op = lazy_random_walk(graph)
    if isinstance(plan, SharedScalesPlan):
        maps = scattering(op, graph.features, plan.scales, cfg.order,
                          cfg.activation, cfg.include_lowpass)
        feats = pool_scattering(maps, cfg.moments)
        if cfg.drop_zero_bands:
            feats = _filter_zero_paths(feats, _zero_band_indices(plan.scales))
        return feats
    if isinstance(plan, LegsOneHotPlan):
        selector = plan.selector()
        sigma = get_activation(cfg.activation)
        maps = _cascade(op, graph.features,
                        lambda s: legs_wavelets(s, selector, final_as_lowpass=True),
                        selector.t_max, cfg.order, sigma, cfg.include_lowpass)
        return pool_scattering(maps, cfg.moments)
    pieces, labels = [], []
    for c, scales in enumerate(plan.scales):
        if scales is None:
            continue
        maps = scattering(op, graph.features[:, c:c + 1], scales, cfg.order,
                          cfg.activation, cfg.include_lowpass)
        feats = pool_scattering(maps, cfg.moments, channel_names=[f"c{c}"])
        if cfg.drop_zero_bands:
            feats = _filter_zero_paths(feats, _zero_band_indices(scales))
        pieces.append(feats.vector)
        labels.extend(feats.layout)
    if not pieces:
        raise AllChannelsUninformative("scale plan drops every channel")
    return ScatteringFeatures(np.concatenate(pieces), tuple(labels))


def extract_features(dataset: GraphDataset, plan: ScalePlan, cfg: ScatteringConfig,
                     workers: int | None = None) -> tuple[np.ndarray, tuple[str, ...]]:
    """Feature matrix (n_graphs x F) plus the shared column layout."""
    def one(graph):
        return graph_features(graph, plan, cfg)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            all_feats = list(pool.map(one, dataset.graphs))
    else:
        all_feats = [one(g) for g in dataset.graphs]
    layout = all_feats[0].layout
    for f in all_feats[1:]:
        if f.layout != layout:
            raise InvalidScale("graphs disagree on feature layout")
    return np.stack([f.vector for f in all_feats]), layout
