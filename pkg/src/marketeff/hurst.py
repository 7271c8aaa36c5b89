"""Hurst exponent estimators: DFA, DMA and height-height correlation (HHCA/GHE).

All three work on the profile (demeaned cumulative sum of returns) and
regress the log of a second-order fluctuation on the log of scale; H is half
the slope. Every estimate keeps the scaling points it was fitted on, so
``fit_power_law(est.points)`` reproduces ``est.h_raw`` bit for bit for the
single-fit methods.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import DegenerateFitError, InsufficientDataError
from .scaling import ScalingPoint, check_fluctuations, fit_power_law, points_from
from .series import Profile, ReturnSeries, is_constant, profile

__all__ = [
    "HurstEstimate",
    "dfa",
    "dfa_combined",
    "dma",
    "hhca",
    "dfa_on_profile",
    "dma_on_profile",
    "hhca_on_profile",
    "dfa_scales",
    "fit_power_law",
    "ScalingPoint",
]

DFA_S_MIN = 5
DFA_S_MAX_DIVISOR = 5.0
DFA_N_SCALES = 20
DMA_WINDOWS = tuple(range(3, 22, 2))
HHCA_TAU_MAX = (5, 20)
MIN_T_DMA = 100
MIN_T_HHCA = 100


@dataclass(frozen=True)
class HurstEstimate:
    method: str
    h_raw: float
    points: tuple[ScalingPoint, ...]
    sub_estimates: tuple[float, ...]
    variant: str = ""
    components: tuple["HurstEstimate", ...] = ()

    @property
    def h_clamped(self) -> float:
        return min(1.0, max(0.0, self.h_raw))

    @property
    def label(self) -> str:
        return f"{self.method}_{self.variant}" if self.variant else self.method

    def leaves(self) -> tuple["HurstEstimate", ...]:
        """Single-fit estimates underneath this one (itself if it has no components)."""
        if not self.components:
            return (self,)
        return tuple(leaf for c in self.components for leaf in c.leaves())


def _combine(method: str, parts: Sequence[HurstEstimate]) -> HurstEstimate:
    subs = tuple(p.h_raw for p in parts)
    return HurstEstimate(method, float(np.mean(subs)), (), subs, "combined", tuple(parts))


def _path(x: Profile | np.ndarray | Sequence[float]) -> np.ndarray:
    if isinstance(x, Profile):
        return x.values
    return np.ascontiguousarray(x, dtype=float)


def _profile_of(returns: ReturnSeries | np.ndarray | Sequence[float], method: str) -> np.ndarray:
    values = returns.values if isinstance(returns, ReturnSeries) else np.asarray(returns, dtype=float)
    if values.size >= 2 and is_constant(values):
        raise DegenerateFitError(f"{method}: constant returns have an identically zero profile")
    return profile(values).values


def dfa_scales(t: int, s_min: int = DFA_S_MIN, s_max_divisor: float = DFA_S_MAX_DIVISOR,
               n_scales: int = DFA_N_SCALES) -> np.ndarray:
    """Log-spaced unique integer box sizes between ``s_min`` and ``floor(t / s_max_divisor)``."""
    s_max = int(t // s_max_divisor)
    if s_max < s_min:
        raise InsufficientDataError(f"DFA: T={t} gives s_max={s_max} below s_min={s_min}")
    scales = np.unique(np.round(np.geomspace(s_min, s_max, n_scales)).astype(np.int64))
    if scales.size < 5:
        raise InsufficientDataError(f"DFA: T={t} yields only {scales.size} distinct scales (need 5)")
    return scales


def dfa_on_profile(path, order: int = 1, *, s_min: int = DFA_S_MIN,
                   s_max_divisor: float = DFA_S_MAX_DIVISOR, n_scales: int = DFA_N_SCALES) -> HurstEstimate:
    if order not in (1, 2):
        raise ValueError(f"DFA order must be 1 or 2, got {order}")
    if s_min < order + 2:
        raise ValueError(f"DFA order {order} needs s_min >= {order + 2}")
    y = _path(path)
    scales = dfa_scales(y.size, s_min, s_max_divisor, n_scales)
    f2 = np.asarray(kernels.dfa_fluctuations(y, scales, order))
    check_fluctuations(f2, float(np.mean(y * y)), "DFA")
    points = points_from(scales, f2)
    h = fit_power_law(points).slope / 2.0
    return HurstEstimate("DFA", h, points, (h,), f"order{order}")


def dfa(returns, order: int = 1, **params) -> HurstEstimate:
    """Detrended fluctuation analysis with polynomial detrending of the given order."""
    return dfa_on_profile(_profile_of(returns, "DFA"), order, **params)


def dfa_combined(returns, **params) -> HurstEstimate:
    """Mean of the linear and quadratic DFA estimates."""
    y = _profile_of(returns, "DFA")
    return _combine("DFA", [dfa_on_profile(y, 1, **params), dfa_on_profile(y, 2, **params)])


def dma_on_profile(path, *, windows: Sequence[int] = DMA_WINDOWS) -> HurstEstimate:
    y = _path(path)
    windows = np.asarray(sorted(windows), dtype=np.int64)
    if np.any(windows < 3) or np.any(windows % 2 == 0):
        raise ValueError("DMA windows must be odd and >= 3")
    if y.size < MIN_T_DMA or y.size < 3 * windows[-1]:
        raise InsufficientDataError(f"DMA: T={y.size} too short (need >= {max(MIN_T_DMA, 3 * windows[-1])})")
    f2 = np.asarray(kernels.dma_fluctuations(y, windows))
    check_fluctuations(f2, float(np.mean(y * y)), "DMA")
    points = points_from(windows, f2)
    h = fit_power_law(points).slope / 2.0
    return HurstEstimate("DMA", h, points, (h,))


def dma(returns, **params) -> HurstEstimate:
    """Centred detrending moving average over odd windows 3, 5, ..., 21."""
    return dma_on_profile(_profile_of(returns, "DMA"), **params)


def _k2(y: np.ndarray, tau: int, coarse: bool) -> float:
    if coarse:
        d = y[tau::tau] - y[: y.size - tau : tau]
    else:
        d = y[tau:] - y[:-tau]
    return float(np.mean(d * d))


def _hhca_variant(y: np.ndarray, tau_max_range: tuple[int, int], coarse: bool) -> HurstEstimate:
    lo, hi = tau_max_range
    taus = np.arange(1, hi + 1)
    k2 = np.array([_k2(y, int(tau), coarse) for tau in taus])
    check_fluctuations(k2, float(np.mean(y * y)), "HHCA")
    points = points_from(taus, k2)
    subs = tuple(fit_power_law(points[:tm]).slope / 2.0 for tm in range(lo, hi + 1))
    return HurstEstimate("HHCA", float(np.mean(subs)), points, subs, "coarse" if coarse else "dense")


def hhca_on_profile(path, *, tau_max_range: tuple[int, int] = HHCA_TAU_MAX, variant: str = "both") -> HurstEstimate:
    """Height-height correlation on an integrated path.

    For each tau_max in ``tau_max_range`` (inclusive) H is half the slope of
    ln K2(tau) on ln tau over tau = 1..tau_max; the variant estimate is the mean
    of those fits. ``dense`` uses every overlapping increment, ``coarse``
    samples t in steps of tau; ``both`` averages the two.
    """
    lo, hi = tau_max_range
    if not 3 <= lo <= hi:
        raise ValueError(f"tau_max range must satisfy 3 <= lo <= hi, got {tau_max_range}")
    y = _path(path)
    if y.size < max(MIN_T_HHCA, 4 * hi):
        raise InsufficientDataError(f"HHCA: T={y.size} too short (need >= {max(MIN_T_HHCA, 4 * hi)})")
    if variant == "dense":
        return _hhca_variant(y, tau_max_range, False)
    if variant == "coarse":
        return _hhca_variant(y, tau_max_range, True)
    if variant != "both":
        raise ValueError(f"unknown HHCA variant {variant!r}")
    return _combine("HHCA", [_hhca_variant(y, tau_max_range, False), _hhca_variant(y, tau_max_range, True)])


def hhca(returns, **params) -> HurstEstimate:
    return hhca_on_profile(_profile_of(returns, "HHCA"), **params)
