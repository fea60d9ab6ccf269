"""Cross-validated desk-scale evaluation: fit scales on training folds
only, extract scattering moments, train the linear probe, score.

The whole pipeline is a pure function of (dataset bytes, config, seed):
fold assignment is seeded, scale fitting never sees test graphs, and all
reductions run in fixed order, so metrics are byte-reproducible for any
worker count. Wall-clock timings are collected per phase but kept out of
the deterministic metrics document unless explicitly requested.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .data import GraphDataset, load_benchmark_dir, load_json_graphs
from .errors import InvalidScale, MissingLabels, SchemaError
from .features import (
    LegsOneHotPlan,
    PerChannelPlan,
    ScatteringConfig,
    SharedScalesPlan,
    extract_features,
)
from .infogain import InfoGainConfig, fit
from .logistic import (
    LogisticConfig,
    accuracy,
    standardize_columns,
    train_logistic,
)
from .scales import ScaleSet, dyadic_scales


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a benchmark run needs, JSON round-trippable."""

    dataset_path: str
    dataset_format: str = "auto"  # auto | tu | json
    scale_source: dict = field(default_factory=lambda: {"kind": "dyadic", "J": 4})
    scattering: ScatteringConfig = ScatteringConfig()
    classifier: LogisticConfig = LogisticConfig()
    folds: int = 10
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.folds < 2:
            raise InvalidScale(f"cross-validation needs folds >= 2, got {self.folds}")
        kind = self.scale_source.get("kind")
        if kind not in ("dyadic", "infogain", "legs_onehot"):
            raise SchemaError("/scale_source/kind",
                              f"expected dyadic|infogain|legs_onehot, got {kind!r}")

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        ds = doc.get("dataset", {})
        scat = doc.get("scattering", {})
        clf = doc.get("classifier", {})
        return cls(
            dataset_path=ds.get("path", doc.get("dataset_path", "")),
            dataset_format=ds.get("format", "auto"),
            scale_source=doc.get("scale_source", {"kind": "dyadic", "J": 4}),
            scattering=ScatteringConfig(
                order=int(scat.get("order", 2)),
                moments=int(scat.get("moments", 4)),
                include_lowpass=bool(scat.get("include_lowpass", True)),
                activation=scat.get("activation", "abs"),
                drop_zero_bands=bool(scat.get("drop_zero_bands", False)),
            ),
            classifier=LogisticConfig(
                learning_rate=float(clf.get("learning_rate", 0.5)),
                epochs=int(clf.get("epochs", 2000)),
                l2=float(clf.get("l2", 1e-3)),
                tol=float(clf.get("tol", 1e-6)),
                class_weight=bool(clf.get("class_weight", False)),
            ),
            folds=int(doc.get("folds", 10)),
            seed=int(doc.get("seed", 0)),
            workers=int(doc.get("workers", 1)),
        )


@dataclass(frozen=True)
class Metrics:
    """Per-fold accuracies with their mean, (n-1)-denominator standard
    deviation, and per-phase wall-clock seconds."""

    per_fold: tuple[float, ...]
    mean: float
    std: float
    timings: dict

    def to_dict(self, include_timings: bool = False) -> dict:
        doc = {
            "per_fold": list(self.per_fold),
            "mean": self.mean,
            "std": self.std,
        }
        if include_timings:
            doc["timings"] = dict(self.timings)
        return doc


def load_dataset(path: str, fmt: str = "auto") -> GraphDataset:
    if fmt == "auto":
        fmt = "json" if str(path).endswith(".json") else "tu"
    if fmt == "json":
        return load_json_graphs(path)
    if fmt == "tu":
        return load_benchmark_dir(path)
    raise SchemaError("/dataset/format", f"unknown format {fmt!r}")


def stratified_folds(labels: np.ndarray, k: int, seed: int) -> list[np.ndarray]:
    """Deal each class round-robin into k folds after a seeded shuffle;
    returns the test-index array of every fold."""
    labels = np.asarray(labels)
    if k < 2:
        raise InvalidScale(f"folds must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        members = members[rng.permutation(len(members))]
        for pos, idx in enumerate(members):
            folds[pos % k].append(int(idx))
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


def resolve_plan(source: dict, train: GraphDataset, workers: int = 1):
    """Turn a scale_source spec into a concrete plan, fitting on the given
    training split when the source is the information-gain selector."""
    kind = source["kind"]
    if kind == "dyadic":
        return SharedScalesPlan(dyadic_scales(int(source.get("J", 4))))
    if kind == "legs_onehot":
        return LegsOneHotPlan(ScaleSet(tuple(source["scales"])))
    cfg = infogain_config_from_source(source)
    model = fit(train, cfg, workers=workers)
    return PerChannelPlan.from_model(model)


def infogain_config_from_source(source: dict) -> InfoGainConfig:
    kwargs = dict(
        t_J=int(source.get("t_J", 16)),
        zero_substitution=source.get("zeros", "half-min-nonzero"),
        class_balance=bool(source.get("class_balance", False)),
        uninformative_tolerance=float(source.get("uninformative_tolerance", 0.5)),
        sample_fraction=float(source.get("sample_fraction", 1.0)),
    )
    if "quantiles" in source:
        return InfoGainConfig(quantiles=tuple(source["quantiles"]), **kwargs)
    return InfoGainConfig.from_quantile_interval(
        float(source.get("quantile_interval", 0.25)), **kwargs)


def cross_validate(dataset: GraphDataset, config: ExperimentConfig) -> Metrics:
    """Stratified k-fold evaluation; scale fitting reads training folds
    only. Results are reduced in fold order."""
    if dataset.labels is None:
        raise MissingLabels("cross-validation needs a labeled dataset")
    folds = stratified_folds(dataset.labels, config.folds, config.seed)
    all_idx = np.arange(len(dataset))
    scores = []
    timings = {"fit": 0.0, "transform": 0.0, "train": 0.0}
    for test_idx in folds:
        train_idx = np.setdiff1d(all_idx, test_idx)
        train_ds = dataset.subset(train_idx)
        test_ds = dataset.subset(test_idx)

        t0 = time.perf_counter()
        plan = resolve_plan(config.scale_source, train_ds, config.workers)
        t1 = time.perf_counter()
        X_train, layout = extract_features(train_ds, plan, config.scattering,
                                           config.workers)
        X_test, _ = extract_features(test_ds, plan, config.scattering,
                                     config.workers)
        t2 = time.perf_counter()
        mean, std = standardize_columns(X_train)
        model = train_logistic((X_train - mean) / std, dataset.labels[train_idx],
                               config.classifier)
        scores.append(accuracy(model, (X_test - mean) / std,
                               dataset.labels[test_idx]))
        t3 = time.perf_counter()
        timings["fit"] += t1 - t0
        timings["transform"] += t2 - t1
        timings["train"] += t3 - t2

    per_fold = tuple(float(s) for s in scores)
    return Metrics(
        per_fold=per_fold,
        mean=float(np.mean(per_fold)),
        std=float(np.std(per_fold, ddof=1)),
        timings=timings,
    )
