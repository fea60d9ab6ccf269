"""Dataset ingestion: the four/five-file benchmark text layout and a JSON
graph format, both validated down to file and line.

Benchmark text layout (all indices 1-based in the files):
  <DS>_A.txt               one "i, j" edge per line, both directions listed
  <DS>_graph_indicator.txt line k holds the graph id of node k
  <DS>_graph_labels.txt    one class label per graph
  <DS>_node_labels.txt     optional; integer node label, one-hot encoded
  <DS>_node_attributes.txt optional; comma-separated real attributes

When both node labels and attributes exist the channels are concatenated,
one-hot labels first. Class labels are remapped to 0..K-1 in sorted order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    DanglingEdge,
    EmptyDataset,
    EmptyGraph,
    MalformedLine,
    MissingFile,
    SchemaError,
)
from .graph import Graph, build_graph


@dataclass(frozen=True)
class GraphDataset:
    """An immutable list of graphs with aligned class labels."""

    graphs: tuple[Graph, ...]
    labels: np.ndarray | None
    name: str = "dataset"

    def __post_init__(self):
        if not self.graphs:
            raise EmptyDataset(f"dataset {self.name!r} has no graphs")
        channels = {g.n_channels for g in self.graphs}
        if len(channels) != 1:
            raise SchemaError("/", f"graphs disagree on channel count: {sorted(channels)}")
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=np.int64)
            if len(labels) != len(self.graphs):
                raise SchemaError("/", "labels length does not match graph count")
            labels.flags.writeable = False
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.graphs)

    @property
    def n_graphs(self) -> int:
        return len(self.graphs)

    @property
    def n_channels(self) -> int:
        return self.graphs[0].n_channels

    def class_counts(self) -> dict[int, int]:
        if self.labels is None:
            return {}
        classes, counts = np.unique(self.labels, return_counts=True)
        return {int(c): int(n) for c, n in zip(classes, counts)}

    def subset(self, indices, name: str | None = None) -> "GraphDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return GraphDataset(
            tuple(self.graphs[i] for i in indices),
            None if self.labels is None else self.labels[indices],
            name or self.name,
        )

    def stats(self) -> dict:
        """Summary counts: graphs, channels, classes, mean nodes/edges."""
        nodes = [g.n_nodes for g in self.graphs]
        edges = [g.n_edges for g in self.graphs]
        return {
            "name": self.name,
            "graphs": self.n_graphs,
            "node_features": self.n_channels,
            "avg_nodes": float(np.mean(nodes)),
            "avg_edges": float(np.mean(edges)),
            "class_counts": self.class_counts(),
        }


# -- benchmark text format ----------------------------------------------------

def _read_lines(path: Path) -> list[str]:
    if not path.is_file():
        raise MissingFile(f"required file missing: {path}")
    return path.read_text(encoding="utf-8").splitlines()


def _parse_int(path: Path, line_no: int, text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise MalformedLine(path, line_no, f"expected an integer, got {text!r}") from None


def _parse_pair(path: Path, line_no: int, text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise MalformedLine(path, line_no, f"expected 'i, j', got {text!r}")
    return (_parse_int(path, line_no, parts[0]), _parse_int(path, line_no, parts[1]))


def _find_prefix(directory: Path) -> str:
    suffix = "_A.txt"
    hits = sorted(p.name[:-len(suffix)] for p in directory.glob(f"*{suffix}"))
    if not hits:
        raise MissingFile(f"no *_A.txt edge file under {directory}")
    return hits[0]


def load_benchmark_dir(path, name: str | None = None) -> GraphDataset:
    """Parse a benchmark dataset directory into a GraphDataset.

    Raises DanglingEdge for edges spanning two graphs, EmptyGraph for a
    graph id with no nodes, and MalformedLine (with file and line number)
    for anything unparseable.
    """
    directory = Path(path)
    if not directory.is_dir():
        raise MissingFile(f"dataset directory not found: {directory}")
    prefix = _find_prefix(directory)
    name = name or prefix

    ind_path = directory / f"{prefix}_graph_indicator.txt"
    indicator = [_parse_int(ind_path, i + 1, s)
                 for i, s in enumerate(_read_lines(ind_path))]
    if not indicator:
        raise EmptyDataset(f"{ind_path} is empty")
    n_graphs = max(indicator)
    node_graph = np.asarray(indicator, dtype=np.int64) - 1
    counts = np.bincount(node_graph, minlength=n_graphs)
    if np.any(counts == 0):
        missing = int(np.flatnonzero(counts == 0)[0]) + 1
        raise EmptyGraph(f"graph id {missing} has no nodes")
    # local (per-graph) ids in file order
    offsets = np.zeros(n_graphs + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    local_id = np.arange(len(node_graph)) - offsets[node_graph]

    lab_path = directory / f"{prefix}_graph_labels.txt"
    raw_labels = [_parse_int(lab_path, i + 1, s)
                  for i, s in enumerate(_read_lines(lab_path))]
    if len(raw_labels) != n_graphs:
        raise MalformedLine(lab_path, len(raw_labels),
                            f"expected {n_graphs} labels, got {len(raw_labels)}")
    classes = sorted(set(raw_labels))
    remap = {c: k for k, c in enumerate(classes)}
    labels = np.array([remap[v] for v in raw_labels], dtype=np.int64)

    features = _node_channels(directory, prefix, len(node_graph))

    edges_path = directory / f"{prefix}_A.txt"
    per_graph_edges: list[list[tuple[int, int, float]]] = [[] for _ in range(n_graphs)]
    for line_no, text in enumerate(_read_lines(edges_path), start=1):
        if not text.strip():
            continue
        u, v = _parse_pair(edges_path, line_no, text)
        if not (1 <= u <= len(node_graph)) or not (1 <= v <= len(node_graph)):
            raise MalformedLine(edges_path, line_no,
                                f"node id out of range: ({u}, {v})")
        gu, gv = node_graph[u - 1], node_graph[v - 1]
        if gu != gv:
            raise DanglingEdge(
                f"{edges_path}:{line_no}: edge ({u}, {v}) spans graphs "
                f"{gu + 1} and {gv + 1}")
        per_graph_edges[gu].append((int(local_id[u - 1]), int(local_id[v - 1]), 1.0))

    graphs = []
    for g in range(n_graphs):
        sel = node_graph == g
        graphs.append(build_graph(per_graph_edges[g], int(counts[g]),
                                  features[sel], int(labels[g])))
    return GraphDataset(tuple(graphs), labels, name)


def _node_channels(directory: Path, prefix: str, n_nodes: int) -> np.ndarray:
    lab_path = directory / f"{prefix}_node_labels.txt"
    attr_path = directory / f"{prefix}_node_attributes.txt"
    blocks = []
    if lab_path.is_file():
        raw = [_parse_int(lab_path, i + 1, s)
               for i, s in enumerate(_read_lines(lab_path))]
        if len(raw) != n_nodes:
            raise MalformedLine(lab_path, len(raw),
                                f"expected {n_nodes} node labels, got {len(raw)}")
        values = sorted(set(raw))
        index = {v: k for k, v in enumerate(values)}
        onehot = np.zeros((n_nodes, len(values)))
        onehot[np.arange(n_nodes), [index[v] for v in raw]] = 1.0
        blocks.append(onehot)
    if attr_path.is_file():
        rows = []
        for i, s in enumerate(_read_lines(attr_path)):
            try:
                rows.append([float(v) for v in s.split(",")])
            except ValueError:
                raise MalformedLine(attr_path, i + 1,
                                    f"expected comma-separated reals, got {s!r}") from None
        if len(rows) != n_nodes:
            raise MalformedLine(attr_path, len(rows),
                                f"expected {n_nodes} attribute rows, got {len(rows)}")
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise MalformedLine(attr_path, 1, "attribute rows differ in width")
        blocks.append(np.array(rows))
    if not blocks:
        raise MissingFile(
            f"neither {lab_path.name} nor {attr_path.name} found under {directory}")
    return np.hstack(blocks)


# -- JSON graphs ----------------------------------------------------------------

def load_json_graphs(path, name: str | None = None) -> GraphDataset:
    """Load a JSON array of {nodes, edges, features, label} objects.

    Schema violations raise SchemaError carrying a JSON-pointer-style path
    to the offending element.
    """
    p = Path(path)
    if not p.is_file():
        raise MissingFile(f"dataset file not found: {p}")
    with open(p, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, list):
        raise SchemaError("/", "expected a JSON array of graph objects")
    if not doc:
        raise EmptyDataset(f"{p} holds an empty array")
    graphs, labels, labelled = [], [], True
    for k, item in enumerate(doc):
        where = f"/{k}"
        if not isinstance(item, dict):
            raise SchemaError(where, "expected a graph object")
        for key in ("nodes", "edges", "features"):
            if key not in item:
                raise SchemaError(f"{where}/{key}", "missing required key")
        n = item["nodes"]
        if not isinstance(n, int) or n <= 0:
            raise SchemaError(f"{where}/nodes", "must be a positive integer")
        edges = []
        for e, edge in enumerate(item["edges"]):
            if not isinstance(edge, list) or len(edge) not in (2, 3):
                raise SchemaError(f"{where}/edges/{e}",
                                  "expected [i, j] or [i, j, weight]")
            w = float(edge[2]) if len(edge) == 3 else 1.0
            edges.append((int(edge[0]), int(edge[1]), w))
        feats = item["features"]
        if not isinstance(feats, list) or len(feats) != n:
            raise SchemaError(f"{where}/features",
                              f"expected {n} feature rows, got {len(feats) if isinstance(feats, list) else type(feats).__name__}")
        widths = {len(r) for r in feats}
        if len(widths) != 1:
            raise SchemaError(f"{where}/features", "feature rows differ in width")
        label = item.get("label")
        if label is None:
            labelled = False
        graphs.append(build_graph(edges, n, np.array(feats, dtype=np.float64),
                                  None if label is None else int(label)))
        labels.append(label)
    dataset_labels = np.array(labels, dtype=np.int64) if labelled else None
    return GraphDataset(tuple(graphs), dataset_labels, name or p.stem)


def save_json_graphs(dataset: GraphDataset, path) -> None:
    """Write a dataset in the JSON graph format; floats round-trip exactly."""
    out = []
    for k, g in enumerate(dataset.graphs):
        a = g.adjacency
        edges = [[int(i), int(j), float(w)]
                 for i, j, w in zip(a._rows, a.col_idx, a.values) if i < j]
        item = {
            "nodes": g.n_nodes,
            "edges": edges,
            "features": [[float(v) for v in row] for row in g.features],
        }
        if dataset.labels is not None:
            item["label"] = int(dataset.labels[k])
        out.append(item)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(out, fh, indent=1)
        fh.write("\n")
