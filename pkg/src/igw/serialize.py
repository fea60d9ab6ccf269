"""File exports: feature CSVs, model JSON, and information-curve CSVs.

All floats are written with 17 significant digits so round trips are
bit-exact; JSON documents are dumped with sorted keys so repeated runs are
byte-identical.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import IoError
from .infogain import InfoGainModel


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def dump_json(doc, path) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_json(path):
    p = Path(path)
    if not p.is_file():
        raise IoError(f"file not found: {p}")
    with open(p, "r", encoding="utf-8") as fh:
        return json.load(fh)


# -- features ----------------------------------------------------------------

def export_features(matrix: np.ndarray, layout, path,
                    labels: np.ndarray | None = None) -> None:
    """One row per graph: index, optional label, then the pooled features
    under their layout labels."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[1] != len(layout):
        raise IoError("feature matrix width does not match layout")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            head = ["graph"] + (["label"] if labels is not None else []) + list(layout)
            fh.write(",".join(head) + "\n")
            for i, row in enumerate(matrix):
                cells = [str(i)]
                if labels is not None:
                    cells.append(str(int(labels[i])))
                cells.extend(_fmt(v) for v in row)
                fh.write(",".join(cells) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def import_features(path):
    """Read back an export_features file -> (matrix, labels or None, layout)."""
    p = Path(path)
    if not p.is_file():
        raise IoError(f"file not found: {p}")
    with open(p, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        has_labels = len(header) > 1 and header[1] == "label"
        start = 2 if has_labels else 1
        layout = tuple(header[start:])
        rows, labels = [], []
        for line in fh:
            cells = line.rstrip("\n").split(",")
            if has_labels:
                labels.append(int(cells[1]))
            rows.append([float(v) for v in cells[start:]])
    matrix = np.array(rows, dtype=np.float64)
    return matrix, (np.array(labels, dtype=np.int64) if has_labels else None), layout


# -- model and curves -----------------------------------------------------------

def export_model(model: InfoGainModel, path) -> None:
    dump_json(model.to_dict(), path)


def load_model(path) -> InfoGainModel:
    return InfoGainModel.from_dict(load_json(path))


def export_curves(model: InfoGainModel, path) -> None:
    """CSV of the information curves behind the fitted scales, one row per
    (t, channel) for informative channels: exactly (t_J - 2) rows each."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,channel,raw_cumsum,rescaled\n")
            for curve in model.curves:
                if curve.uninformative:
                    continue
                for t, raw, scaled in zip(curve.t_values, curve.raw_cumsum,
                                          curve.rescaled):
                    fh.write(f"{t},{curve.channel},{_fmt(raw)},{_fmt(scaled)}\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
