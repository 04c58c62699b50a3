"""Phase estimation with a truncated gaussian window."""

import math
from dataclasses import dataclass

import numpy as np

from ..poly import PolynomialState


@dataclass(frozen=True)
class GaussianWindowSpec:
    """Window of width ``1/sigma`` sampled at ``y = -N/2 .. N/2 - 1``."""

    N: int
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "sigma", float(self.sigma))
        if self.N % 2 or not 4 <= self.N <= 4096:
            raise ValueError(f"N must be even and lie in 4..4096, got {self.N}")
        if not self.sigma > 0 or not math.isfinite(self.sigma):
            raise ValueError("sigma must be a positive real")

    @property
    def offsets(self):
        return np.arange(-self.N // 2, self.N // 2)

    def window(self, y):
        """``phi(y) = (2 sigma^2 / pi)^{1/4} exp(-sigma^2 y^2)``."""
        s = self.sigma
        y = np.asarray(y, dtype=float)
        return (2 * s * s / math.pi) ** 0.25 * np.exp(-s * s * y * y)

    @property
    def truncation_bound(self):
        """Gaussian tail scale ``sigma exp(-N^2 sigma^2 / 2)`` of the dropped terms."""
        return self.sigma * math.exp(-(self.N * self.sigma) ** 2 / 2)

    def to_dict(self):
        return {"N": self.N, "sigma": self.sigma}


def window_weights(spec):
    """Normalized window ``phi(y)/K`` over the kept offsets (the ``A_0 |0>`` amplitudes)."""
    phi = spec.window(spec.offsets)
    return phi / np.linalg.norm(phi)


def discarded_norm(spec, periods=8):
    """Measured window mass outside the kept offsets, relative to the full wrapped sum."""
    n = spec.N
    y = np.arange(-n // 2 - periods * n, n // 2 + periods * n)
    phi = spec.window(y)
    kept = (y >= -n // 2) & (y < n // 2)
    return float(np.sqrt(np.sum(phi[~kept] ** 2) / np.sum(phi**2)))


def build_gaussian_window_state(spec):
    """State whose power ``y + N/2`` carries ``(phi(y)/(K sqrt N)) sum_k omega^{-ky} |k>``.

    Each coefficient vector is a scaled DFT column, so the Gram matrix is
    diagonal.  ``z^{N/2}`` shifts the powers to ``0 .. N-1``.

    The register is read with the control ``k`` relabelled by ``(-1)^k``:
    since ``omega^{-k(y + N/2)} = (-1)^k omega^{-ky}``, row ``k`` equals
    ``(-1)^k`` times the plain DFT phase pattern of power ``y + N/2``.
    """
    n = spec.N
    y = spec.offsets
    w = window_weights(spec)
    k = np.arange(n)
    # gam[p, k] with p = y + N/2
    gam = w[:, None] * np.exp(-2j * np.pi * np.outer(y, k) / n) / math.sqrt(n)
    return PolynomialState(gam, 0, dim=n)


def windowed_distribution(spec, phase):
    """Independent oracle: ``|(1/(K sqrt N)) sum_y phi(y) e^{2 pi i phase y} omega^{-ky}|^2``."""
    n = spec.N
    y = spec.offsets
    w = window_weights(spec)
    amp = np.array(
        [np.sum(w * np.exp(2j * np.pi * phase * y) * np.exp(-2j * np.pi * k * y / n)) for k in range(n)]
    ) / math.sqrt(n)
    return np.abs(amp) ** 2
