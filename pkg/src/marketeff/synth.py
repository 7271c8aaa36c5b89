"""Seeded synthetic return series used as recovery oracles.

Streams come from numpy's ``PCG64`` (default) or counter-based ``Philox``
bit generators seeded with the 64-bit seed, so output is a pure
function of :class:`SynthSpec`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import GenerationError
from .series import ReturnSeries

__all__ = ["SynthSpec", "generate", "generate_fgn", "generate_ar1", "fgn_autocovariance",
           "circulant_eigenvalues", "KINDS"]

KINDS = ("fgn", "ar1", "white", "rw")
_BIT_GENERATORS = {"PCG64": np.random.PCG64, "Philox": np.random.Philox}


@dataclass(frozen=True)
class SynthSpec:
    kind: str
    t: int
    seed: int = 0
    h: float | None = None
    phi: float | None = None
    rng: str = "PCG64"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GenerationError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.t < 2:
            raise GenerationError(f"length must be >= 2, got {self.t}")
        if not 0 <= self.seed < 2**64:
            raise GenerationError("seed must be a 64-bit unsigned integer")
        if self.rng not in _BIT_GENERATORS:
            raise GenerationError(f"unknown rng {self.rng!r}; expected one of {sorted(_BIT_GENERATORS)}")
        if (self.h is not None) != (self.kind == "fgn"):
            raise GenerationError("h is required for kind 'fgn' and only for it")
        if (self.phi is not None) != (self.kind == "ar1"):
            raise GenerationError("phi is required for kind 'ar1' and only for it")
        if self.h is not None and not 0 < self.h < 1:
            raise GenerationError(f"h must lie in (0, 1), got {self.h}")
        if self.phi is not None and not -1 < self.phi < 1:
            raise GenerationError(f"|phi| must be < 1, got {self.phi}")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(_BIT_GENERATORS[self.rng](self.seed))

    @property
    def ticker(self) -> str:
        param = f"{self.h:g}" if self.h is not None else f"{self.phi:g}" if self.phi is not None else ""
        return f"{self.kind}{param}_s{self.seed}"


def fgn_autocovariance(h: float, lags) -> np.ndarray:
    k = np.abs(np.asarray(lags, dtype=float))
    return 0.5 * (np.abs(k + 1) ** (2 * h) - 2 * k ** (2 * h) + np.abs(k - 1) ** (2 * h))


def circulant_eigenvalues(acov: np.ndarray) -> np.ndarray:
    """Eigenvalues of the minimal circulant embedding of autocovariances acov[0..n]."""
    acov = np.asarray(acov, dtype=float)
    row = np.concatenate([acov, acov[-2:0:-1]])
    return np.fft.fft(row).real


def _embedding_sqrt(acov: np.ndarray) -> np.ndarray:
    lam = circulant_eigenvalues(acov)
    # rounding slack: eigenvalues are real sums of O(n) terms of size <= acov[0]
    tol = 1e-10 * lam.size * abs(acov[0])
    if np.any(lam < -tol):
        raise GenerationError(
            f"circulant embedding is not non-negative definite (min eigenvalue {lam.min():.3e})"
        )
    return np.sqrt(np.clip(lam, 0.0, None) / lam.size)


def generate_fgn(spec: SynthSpec) -> ReturnSeries:
    """Exact unit-variance fractional Gaussian noise by circulant embedding (Davies-Harte)."""
    if spec.kind != "fgn":
        raise GenerationError(f"generate_fgn needs kind 'fgn', got {spec.kind!r}")
    n = spec.t
    root = _embedding_sqrt(fgn_autocovariance(spec.h, np.arange(n + 1)))
    rng = spec.generator()
    z = rng.standard_normal(root.size) + 1j * rng.standard_normal(root.size)
    x = np.fft.fft(root * z).real[:n]
    return ReturnSeries(spec.ticker, x)


def generate_ar1(spec: SynthSpec) -> ReturnSeries:
    """Stationary Gaussian AR(1) with unit innovation variance."""
    if spec.kind != "ar1":
        raise GenerationError(f"generate_ar1 needs kind 'ar1', got {spec.kind!r}")
    phi = spec.phi
    rng = spec.generator()
    eps = rng.standard_normal(spec.t)
    x = np.empty(spec.t)
    prev = rng.standard_normal() / math.sqrt(1.0 - phi * phi)
    for i in range(spec.t):
        prev = phi * prev + eps[i]
        x[i] = prev
    return ReturnSeries(spec.ticker, x)


def generate(spec: SynthSpec) -> ReturnSeries:
    """Dispatch on kind. ``rw`` returns the random-walk levels themselves."""
    if spec.kind == "fgn":
        return generate_fgn(spec)
    if spec.kind == "ar1":
        return generate_ar1(spec)
    noise = spec.generator().standard_normal(spec.t)
    if spec.kind == "white":
        return ReturnSeries(spec.ticker, noise)
    return ReturnSeries(spec.ticker, np.cumsum(noise))
