"""Selector-matrix generalized wavelets (inference only).

A J x t_max selector matrix F mixes diffusion powers P^t x, t = 1..t_max,
into J + 1 bands: band 0 subtracts the first row's mixture from the input,
middle bands are differences of consecutive row mixtures, and the last row
stands alone as a low-pass-like band. With exact one-hot rows the bands
collapse to plain difference-of-powers wavelets. The parameters are inputs
here, never trained; the module exists as a comparison wavelet generator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffusion import DiffusionStack
from .errors import DimensionError, ScaleExceedsStack
from .scales import ScaleSet
from .wavelets import WaveletCoefficients


@dataclass(frozen=True)
class SelectorMatrix:
    """Raw parameters theta and the selector F (row-softmax of theta, or
    theta verbatim when the softmax step is disabled, matching the original
    selector code)."""

    theta: np.ndarray
    F: np.ndarray
    softmax_enabled: bool

    @property
    def n_rows(self) -> int:
        return self.F.shape[0]

    @property
    def t_max(self) -> int:
        return self.F.shape[1]


def _row_softmax(theta: np.ndarray) -> np.ndarray:
    shifted = theta - theta.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def selector_matrix(theta: np.ndarray, softmax_enabled: bool = True) -> SelectorMatrix:
    """Wrap a J x t_max parameter matrix as a selector.

    With softmax on, rows of F sum to one and a dominant theta entry makes
    its row approximately one-hot.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 2:
        raise DimensionError(f"theta must be 2-D, got shape {theta.shape}")
    J, t_max = theta.shape
    if J < 2 or t_max < 2:
        raise DimensionError(f"need J >= 2 and t_max >= 2, got {theta.shape}")
    F = _row_softmax(theta) if softmax_enabled else theta.copy()
    F.flags.writeable = False
    return SelectorMatrix(theta, F, softmax_enabled)


def one_hot_theta(scales: ScaleSet, t_max: int | None = None,
                  magnitude: float = 50.0) -> np.ndarray:
    """Theta with a large constant at each target diffusion power, one row
    per scale past t_0 = 0, so the (softmaxed) selector approximates that
    scale selection.

    With magnitude 1.0 and the softmax disabled, the selector rows are
    exact one-hot and the generalized bands reproduce the plain wavelet
    transform on `scales`.
    """
    targets = [t for t in scales.scales if t > 0]
    if t_max is None:
        t_max = scales.t_max
    theta = np.zeros((len(targets), t_max))
    for row, t in enumerate(targets):
        theta[row, t - 1] = magnitude  # column t holds the power P^t
    return theta


def legs_wavelets(stack: DiffusionStack, selector: SelectorMatrix,
                  final_as_lowpass: bool = False) -> WaveletCoefficients:
    """Evaluate the selector-matrix bands on a diffusion stack.

    Returns J + 1 maps: x minus the first row's mixture, consecutive row
    differences, and the last row's mixture. The last map is exposed either
    as a band (default) or in the low-pass slot; either way the maps sum
    back to x exactly.
    """
    if selector.t_max > stack.max_scale:
        raise ScaleExceedsStack(
            f"selector needs t_max {selector.t_max}, stack holds {stack.max_scale}")
    F = selector.F
    J = selector.n_rows
    # row mixtures S_j = sum_t F[j, t] P^t x over powers t = 1..t_max
    mixtures = [
        sum(F[j, t - 1] * stack.frame(t) for t in range(1, selector.t_max + 1))
        for j in range(J)
    ]
    bands = [stack.frame(0) - mixtures[0]]
    bands.extend(mixtures[j] - mixtures[j + 1] for j in range(J - 1))
    if final_as_lowpass:
        return WaveletCoefficients(tuple(bands), lowpass=mixtures[J - 1])
    bands.append(mixtures[J - 1])
    return WaveletCoefficients(tuple(bands), lowpass=None)


def export_selector_csv(selector: SelectorMatrix, path) -> None:
    """Write theta and F side by side, one row per selector row."""
    with open(path, "w", encoding="utf-8") as fh:
        t_max = selector.t_max
        head = [f"theta_t{t}" for t in range(1, t_max + 1)]
        head += [f"F_t{t}" for t in range(1, t_max + 1)]
        fh.write("row," + ",".join(head) + "\n")
        for j in range(selector.n_rows):
            cells = [f"{v:.17g}" for v in selector.theta[j]]
            cells += [f"{v:.17g}" for v in selector.F[j]]
            fh.write(f"{j}," + ",".join(cells) + "\n")


def import_selector_csv(path, softmax_enabled: bool = True) -> SelectorMatrix:
    """Read theta back from export_selector_csv output and rebuild F."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        n_theta = sum(1 for h in header if h.startswith("theta_"))
        for line in fh:
            cells = line.rstrip("\n").split(",")
            rows.append([float(v) for v in cells[1:1 + n_theta]])
    return selector_matrix(np.array(rows), softmax_enabled=softmax_enabled)
