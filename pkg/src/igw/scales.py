"""Integer diffusion-scale sequences."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidScale


@dataclass(frozen=True)
class ScaleSet:
    """A non-decreasing integer scale sequence t_0 <= t_1 <= ... <= t_J.

    t_0 must be 0 and t_J at least 2. Dyadic sets are strictly increasing;
    selected sets may carry duplicates, which produce identically zero
    wavelet bands downstream (kept on purpose).
    """

    scales: tuple[int, ...]

    def __post_init__(self):
        scales = tuple(int(t) for t in self.scales)
        object.__setattr__(self, "scales", scales)
        if len(scales) < 2:
            raise InvalidScale("a scale set needs at least two scales")
        if scales[0] != 0:
            raise InvalidScale(f"t_0 must be 0, got {scales[0]}")
        if any(b < a for a, b in zip(scales, scales[1:])):
            raise InvalidScale(f"scales must be non-decreasing: {scales}")
        if scales[-1] < 2:
            raise InvalidScale(f"t_J must be >= 2, got {scales[-1]}")

    def __len__(self) -> int:
        return len(self.scales)

    def __iter__(self):
        return iter(self.scales)

    @property
    def t_max(self) -> int:
        return self.scales[-1]

    @property
    def n_bands(self) -> int:
        return len(self.scales) - 1

    def band_pairs(self) -> list[tuple[int, int]]:
        """Consecutive (t_{j-1}, t_j) pairs, one per wavelet band."""
        return list(zip(self.scales[:-1], self.scales[1:]))


def dyadic_scales(J: int) -> ScaleSet:
    """The classical set {0, 1, 2, 4, ..., 2^J}."""
    if J < 1:
        raise InvalidScale(f"dyadic J must be >= 1, got {J}")
    return ScaleSet((0,) + tuple(2 ** j for j in range(J + 1)))


def random_scale_set(rng: np.random.Generator, t_max: int, n_interior: int) -> ScaleSet:
    """A random valid generalized scale set ending at t_max (test helper)."""
    if t_max < 2:
        raise InvalidScale("t_max must be >= 2")
    interior = sorted(int(v) for v in rng.integers(1, t_max, size=n_interior))
    return ScaleSet((0, *interior, t_max))
