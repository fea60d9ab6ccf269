"""Diffusion wavelet transforms, geometric scattering maps, and graph-level
moment pooling.

A wavelet band is the difference of two diffusion powers,
Psi_j = P^{t_{j-1}} - P^{t_j}, read off a precomputed DiffusionStack. The
scattering cascade alternates these band-pass filters with a pointwise
nonlinearity; second-order maps re-diffuse the activated first-order
output, so each retained first-order map costs one fresh stack.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .diffusion import DiffusionOperator, DiffusionStack, diffuse_stack
from .errors import InvalidScale, ScaleExceedsStack, UnknownActivation
from .scales import ScaleSet

ACTIVATIONS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "abs": np.abs,
    "relu": lambda v: np.maximum(v, 0.0),
}


def get_activation(name: str) -> Callable[[np.ndarray], np.ndarray]:
    try:
        return ACTIVATIONS[name]
    except KeyError:
        raise UnknownActivation(
            f"unknown activation {name!r}; expected one of {sorted(ACTIVATIONS)}"
        ) from None


@dataclass(frozen=True)
class WaveletCoefficients:
    """Band-pass maps plus the final low-pass map.

    bands[j - 1] = (P^{t_{j-1}} - P^{t_j}) X for j = 1..J. When t_1 = 1 the
    high-pass (I - P) X is simply the first band. lowpass = P^{t_J} X; a
    generator without a separate low-pass (the selector-matrix form with
    its last row kept as a band) stores None there. Bands plus low-pass
    telescope back to X exactly.
    """

    bands: tuple[np.ndarray, ...]
    lowpass: np.ndarray | None
    scales: ScaleSet | None = None

    @property
    def n_bands(self) -> int:
        return len(self.bands)

    @property
    def highpass(self) -> np.ndarray | None:
        """The (I - P) X band, present whenever the scale set starts 0, 1."""
        if self.scales is not None and self.scales.scales[1] == 1:
            return self.bands[0]
        return None

    def reconstruct(self) -> np.ndarray:
        total = sum(self.bands)
        if self.lowpass is not None:
            total = total + self.lowpass
        return total


def wavelet_transform(stack: DiffusionStack, scales: ScaleSet) -> WaveletCoefficients:
    """Difference-of-powers wavelet coefficients over an arbitrary scale set.

    Duplicate consecutive scales yield an all-zero band, which is kept: the
    band count stays determined by the scale set alone.
    """
    if scales.t_max > stack.max_scale:
        raise ScaleExceedsStack(
            f"scale {scales.t_max} exceeds stack maximum {stack.max_scale}")
    bands = tuple(stack.frame(a) - stack.frame(b) for a, b in scales.band_pairs())
    return WaveletCoefficients(bands=bands, lowpass=stack.frame(scales.t_max),
                               scales=scales)


# -- scattering ------------------------------------------------------------

Path = tuple
BandTransform = Callable[[DiffusionStack], WaveletCoefficients]


@dataclass(frozen=True)
class ScatteringMaps:
    """Node-level scattering maps, one n x C array per retained path.

    Paths are ("o1", j) for first-order bands, ("o2", j1, j2) for
    second-order pairs, and ("lowpass",) for the smoothing map.
    """

    paths: tuple[Path, ...]
    maps: tuple[np.ndarray, ...]

    def path_labels(self) -> list[str]:
        return [_path_label(p) for p in self.paths]


def _path_label(path: Path) -> str:
    if path[0] == "o1":
        return f"o1.b{path[1]}"
    if path[0] == "o2":
        return f"o2.b{path[1]}.b{path[2]}"
    return "lowpass"


def _cascade(op: DiffusionOperator, x: np.ndarray, transform: BandTransform,
             t_need: int, order: int, sigma, include_lowpass: bool) -> ScatteringMaps:
    stack = diffuse_stack(op, x, t_need)
    coeffs = transform(stack)
    first = [sigma(band) for band in coeffs.bands]
    paths: list[Path] = [("o1", j) for j in range(len(first))]
    maps: list[np.ndarray] = list(first)
    if order == 2:
        # second-order paths skip the first band: the (0, t_1) high-pass
        # difference is kept first-order only
        for j1 in range(1, len(first) - 1):
            restack = diffuse_stack(op, first[j1], t_need)
            recoeffs = transform(restack)
            for j2 in range(j1 + 1, len(first)):
                paths.append(("o2", j1, j2))
                maps.append(sigma(recoeffs.bands[j2]))
    if include_lowpass:
        if coeffs.lowpass is None:
            raise InvalidScale("band generator exposes no low-pass map")
        paths.append(("lowpass",))
        maps.append(coeffs.lowpass)
    return ScatteringMaps(tuple(paths), tuple(maps))


def scattering(op: DiffusionOperator, x: np.ndarray, scales: ScaleSet,
               order: int = 2, activation: str = "abs",
               include_lowpass: bool = True) -> ScatteringMaps:
    """First- and second-order scattering maps under one scale set.

    U[j] = sigma(Psi_j x); U[j1, j2] = sigma(Psi_{j2} sigma(Psi_{j1} x))
    for band pairs j1 < j2 (the frequency-decreasing convention). Only
    orders 1 and 2 are supported.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    sigma = get_activation(activation)
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    return _cascade(op, x, lambda s: wavelet_transform(s, scales),
                    scales.t_max, order, sigma, include_lowpass)


def scattering_path_count(n_bands: int, order: int, include_lowpass: bool) -> int:
    """Number of retained paths for a band count; layout arithmetic."""
    count = n_bands
    if order == 2:
        count += (n_bands - 1) * (n_bands - 2) // 2
    if include_lowpass:
        count += 1
    return count


# -- pooling ---------------------------------------------------------------

def moment_pool(node_maps: np.ndarray, Q: int) -> np.ndarray:
    """Unnormalized statistical moments: entry (k, q) is sum_i m[i, k]^q
    for q = 1..Q, flattened k-major. Q = 1 is plain sum pooling."""
    if Q < 1:
        raise InvalidScale(f"moment count must be >= 1, got {Q}")
    m = np.asarray(node_maps, dtype=np.float64)
    if m.ndim == 1:
        m = m[:, None]
    out = np.empty((m.shape[1], Q))
    acc = m.copy()
    for q in range(Q):
        out[:, q] = acc.sum(axis=0)
        if q + 1 < Q:
            acc *= m
    return out.reshape(-1)


@dataclass(frozen=True)
class ScatteringFeatures:
    """A pooled per-graph feature vector plus its entry labels.

    Layout is lexicographic in (order, path, channel, moment): for each
    path in cascade order, for each channel, moments q = 1..Q.
    """

    vector: np.ndarray
    layout: tuple[str, ...]

    def __post_init__(self):
        vec = np.ascontiguousarray(np.asarray(self.vector, dtype=np.float64))
        vec.flags.writeable = False
        object.__setattr__(self, "vector", vec)
        if len(self.layout) != len(vec):
            raise InvalidScale("layout length does not match vector length")


def pool_scattering(maps: ScatteringMaps, Q: int,
                    channel_names: list[str] | None = None) -> ScatteringFeatures:
    """Pool node-level maps into one graph-level vector of moments."""
    pieces = []
    labels: list[str] = []
    for path, node_map in zip(maps.paths, maps.maps):
        pieces.append(moment_pool(node_map, Q))
        n_channels = node_map.shape[1] if node_map.ndim == 2 else 1
        for c in range(n_channels):
            cname = channel_names[c] if channel_names else f"c{c}"
            labels.extend(f"{_path_label(path)}.{cname}.q{q}"
                          for q in range(1, Q + 1))
    return ScatteringFeatures(np.concatenate(pieces), tuple(labels))
