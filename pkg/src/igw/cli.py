"""Command-line interface.

Subcommands: fit-scales, curves, features, benchmark, info. Validation
problems (bad flags, malformed files, spec violations) exit with code 2;
unexpected internal failures exit with code 1.
"""
from __future__ import annotations

import argparse
import sys

from .errors import IgwError
from .evaluate import (
    ExperimentConfig,
    cross_validate,
    infogain_config_from_source,
    load_dataset,
    resolve_plan,
)
from .features import ScatteringConfig, extract_features
from .infogain import fit
from .serialize import (
    dump_json,
    export_curves,
    export_features,
    export_model,
    load_json,
    load_model,
)


def _parse_zeros(text: str):
    if text in ("half-min", "half-min-nonzero"):
        return "half-min-nonzero"
    return float(text)


def _parse_scales(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(","))


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True,
                   help="benchmark directory or .json graph file")
    p.add_argument("--format", default="auto", choices=("auto", "tu", "json"))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="igw",
        description="Diffusion wavelets with information-gain scale selection")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-scales", help="fit per-channel diffusion scales")
    _add_dataset_args(p)
    p.add_argument("--tj", type=int, default=16, help="maximum diffusion step")
    p.add_argument("--quantile-interval", type=float, default=0.25,
                   help="quantile stride, e.g. 0.125 for (0.125..0.875)")
    p.add_argument("--zeros", type=_parse_zeros, default="half-min-nonzero",
                   metavar="half-min|FLOAT",
                   help="zero substitution: half-min or a constant like 1e-2")
    p.add_argument("--class-balance", action="store_true",
                   help="re-weight divergence sums by inverse class frequency")
    p.add_argument("--sample-fraction", type=float, default=1.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="model JSON output path")

    p = sub.add_parser("curves", help="export information curves from a model")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="curves CSV output path")

    p = sub.add_parser("features", help="extract pooled scattering features")
    _add_dataset_args(p)
    p.add_argument("--scale-source", required=True,
                   choices=("dyadic", "infogain", "legs-onehot"))
    p.add_argument("--model", help="fitted model JSON (infogain source)")
    p.add_argument("--dyadic-j", type=int, default=4,
                   help="dyadic hyperparameter J (dyadic source)")
    p.add_argument("--scales", type=_parse_scales,
                   help="comma-separated scale set (legs-onehot source)")
    p.add_argument("--order", type=int, default=2, choices=(1, 2))
    p.add_argument("--moments", type=int, default=4)
    p.add_argument("--no-lowpass", action="store_true",
                   help="exclude the low-pass map from pooling")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="features CSV output path")

    p = sub.add_parser("benchmark", help="cross-validated linear-probe run")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--out", required=True, help="metrics JSON output path")
    p.add_argument("--model-out",
                   help="also fit scales on the full dataset and save the model")
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock timings in the metrics JSON "
                        "(breaks byte-reproducibility)")

    p = sub.add_parser("info", help="print dataset summary counts")
    _add_dataset_args(p)
    return parser


def _cmd_fit_scales(args) -> int:
    dataset = load_dataset(args.dataset, args.format)
    source = {
        "kind": "infogain",
        "t_J": args.tj,
        "quantile_interval": args.quantile_interval,
        "zeros": args.zeros,
        "class_balance": args.class_balance,
        "sample_fraction": args.sample_fraction,
    }
    model = fit(dataset, infogain_config_from_source(source), workers=args.workers)
    export_model(model, args.out)
    kept = len(model.informative_channels())
    print(f"fitted {kept}/{model.n_channels} channels -> {args.out}")
    return 0


def _cmd_curves(args) -> int:
    model = load_model(args.model)
    export_curves(model, args.out)
    n_rows = (model.config.t_J - 2) * len(model.informative_channels())
    print(f"wrote {n_rows} curve rows -> {args.out}")
    return 0


def _cmd_features(args) -> int:
    dataset = load_dataset(args.dataset, args.format)
    if args.scale_source == "dyadic":
        source = {"kind": "dyadic", "J": args.dyadic_j}
        plan = resolve_plan(source, dataset)
    elif args.scale_source == "legs-onehot":
        if args.scales is None:
            raise IgwError("--scales is required for the legs-onehot source")
        plan = resolve_plan({"kind": "legs_onehot", "scales": args.scales}, dataset)
    else:
        if args.model is None:
            raise IgwError("--model is required for the infogain source")
        from .features import PerChannelPlan
        plan = PerChannelPlan.from_model(load_model(args.model))
    cfg = ScatteringConfig(order=args.order, moments=args.moments,
                           include_lowpass=not args.no_lowpass)
    matrix, layout = extract_features(dataset, plan, cfg, workers=args.workers)
    export_features(matrix, layout, args.out, labels=dataset.labels)
    print(f"wrote {matrix.shape[0]} x {matrix.shape[1]} features -> {args.out}")
    return 0


def _cmd_benchmark(args) -> int:
    config = ExperimentConfig.from_dict(load_json(args.config))
    dataset = load_dataset(config.dataset_path, config.dataset_format)
    metrics = cross_validate(dataset, config)
    dump_json(metrics.to_dict(include_timings=args.timings), args.out)
    if args.model_out:
        if config.scale_source.get("kind") != "infogain":
            raise IgwError("--model-out needs an infogain scale source")
        model = fit(dataset, infogain_config_from_source(config.scale_source),
                    workers=config.workers)
        export_model(model, args.model_out)
    print(f"accuracy {metrics.mean:.4f} +/- {metrics.std:.4f} "
          f"over {len(metrics.per_fold)} folds -> {args.out}")
    return 0


def _cmd_info(args) -> int:
    stats = load_dataset(args.dataset, args.format).stats()
    print(f"dataset:       {stats['name']}")
    print(f"graphs:        {stats['graphs']}")
    print(f"node features: {stats['node_features']}")
    print(f"avg nodes:     {stats['avg_nodes']:.2f}")
    print(f"avg edges:     {stats['avg_edges']:.2f}")
    if stats["class_counts"]:
        counts = ", ".join(f"{k}: {v}" for k, v in stats["class_counts"].items())
        print(f"class counts:  {counts}")
    return 0


_COMMANDS = {
    "fit-scales": _cmd_fit_scales,
    "curves": _cmd_curves,
    "features": _cmd_features,
    "benchmark": _cmd_benchmark,
    "info": _cmd_info,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except IgwError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - internal failure path
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
