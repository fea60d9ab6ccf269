"""Diffusion wavelets on graphs with information-gain scale selection.

The pipeline: build a sparse lazy random-walk operator, diffuse node
features recursively, band the diffusion stack into wavelets (dyadic,
selected, or selector-matrix generalized), cascade into scattering maps,
pool into graph-level moments, and optionally fit per-channel diffusion
scales from KL-divergence information curves.
"""

from .data import GraphDataset, load_benchmark_dir, load_json_graphs, save_json_graphs
from .diffusion import (
    DiffusionOperator,
    DiffusionStack,
    apply,
    diffuse_stack,
    lazy_random_walk,
)
from .errors import IgwError
from .evaluate import ExperimentConfig, Metrics, cross_validate, stratified_folds
from .features import (
    LegsOneHotPlan,
    PerChannelPlan,
    ScatteringConfig,
    SharedScalesPlan,
    extract_features,
    graph_features,
)
from .graph import Graph, build_graph
from .infogain import (
    InfoGainConfig,
    InfoGainModel,
    InformationCurve,
    aggregate_divergences,
    cumulative_information,
    fit,
    kl_divergence,
    median_scales,
    normalize_channel,
    per_graph_divergences,
    select_scales,
)
from .legs import SelectorMatrix, legs_wavelets, one_hot_theta, selector_matrix
from .logistic import LogisticConfig, LogisticModel, train_logistic
from .scales import ScaleSet, dyadic_scales
from .serialize import export_curves, export_features, export_model, load_model
from .sparse import SparseMatrix
from .wavelets import (
    ScatteringFeatures,
    ScatteringMaps,
    WaveletCoefficients,
    moment_pool,
    pool_scattering,
    scattering,
    wavelet_transform,
)

__version__ = "0.1.0"
