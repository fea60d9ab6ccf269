"""Logistic regression by full-batch gradient descent.

Kept dependency-free on purpose: the harness needs a classifier whose
training is a deterministic pure function of (features, labels, config),
and whose gradient can be checked against finite differences. Multiclass
problems are handled one-vs-rest.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFinite


@dataclass(frozen=True)
class LogisticConfig:
    learning_rate: float = 0.5
    epochs: int = 2000
    l2: float = 1e-3
    tol: float = 1e-6
    class_weight: bool = False


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def binary_sample_weights(y: np.ndarray, enabled: bool) -> np.ndarray:
    """Inverse class-frequency weights with mean one (or all ones)."""
    if not enabled:
        return np.ones(len(y))
    n = len(y)
    classes, counts = np.unique(y, return_counts=True)
    w = np.empty(n)
    for cls, cnt in zip(classes, counts):
        w[y == cls] = n / (len(classes) * cnt)
    return w


def loss_and_gradient(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray,
                      l2: float, sample_weight: np.ndarray):
    """Weighted mean cross-entropy with an l2 penalty on the weights
    (bias unpenalized); returns (loss, grad_w, grad_b)."""
    z = X @ w + b
    p = sigmoid(z)
    eps = 1e-12
    ce = -(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps))
    loss = float(np.mean(sample_weight * ce) + 0.5 * l2 * np.dot(w, w))
    resid = sample_weight * (p - y)
    grad_w = X.T @ resid / len(y) + l2 * w
    grad_b = float(np.mean(resid))
    return loss, grad_w, grad_b


def train_binary(X: np.ndarray, y: np.ndarray, cfg: LogisticConfig):
    """Gradient descent from zero weights until the gradient's infinity
    norm drops below tol or the epoch cap is hit."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise DimensionMismatch("features and labels disagree in length")
    sw = binary_sample_weights(y, cfg.class_weight)
    w = np.zeros(X.shape[1])
    b = 0.0
    for _ in range(cfg.epochs):
        loss, gw, gb = loss_and_gradient(w, b, X, y, cfg.l2, sw)
        if not np.isfinite(loss):
            raise NonFinite("training loss diverged; lower the learning rate")
        if max(np.abs(gw).max(initial=0.0), abs(gb)) < cfg.tol:
            break
        w = w - cfg.learning_rate * gw
        b = b - cfg.learning_rate * gb
    return w, b


@dataclass(frozen=True)
class LogisticModel:
    """Fitted one-vs-rest ensemble (a single pair of weights when K = 2)."""

    classes: tuple[int, ...]
    weights: np.ndarray  # (K or 1, F)
    biases: np.ndarray

    def decision(self, X: np.ndarray) -> np.ndarray:
        return X @ self.weights.T + self.biases

    def predict(self, X: np.ndarray) -> np.ndarray:
        scores = self.decision(X)
        if len(self.classes) == 2:
            picked = (scores[:, 0] >= 0).astype(np.int64)
        else:
            picked = np.argmax(scores, axis=1)
        return np.array([self.classes[k] for k in picked])


def train_logistic(X: np.ndarray, y: np.ndarray,
                   cfg: LogisticConfig = LogisticConfig()) -> LogisticModel:
    y = np.asarray(y, dtype=np.int64)
    classes = tuple(int(c) for c in np.unique(y))
    if len(classes) < 2:
        raise DimensionMismatch("need at least two classes")
    if len(classes) == 2:
        w, b = train_binary(X, (y == classes[1]).astype(np.float64), cfg)
        return LogisticModel(classes, w[None, :], np.array([b]))
    ws, bs = [], []
    for cls in classes:
        w, b = train_binary(X, (y == cls).astype(np.float64), cfg)
        ws.append(w)
        bs.append(b)
    return LogisticModel(classes, np.stack(ws), np.array(bs))


def standardize_columns(train: np.ndarray):
    """Per-column mean/std from the training fold; zero-variance columns
    pass through unscaled."""
    mean = train.mean(axis=0)
    std = train.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    return mean, std


def accuracy(model: LogisticModel, X: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean(model.predict(X) == np.asarray(y)))
