"""First-order autocorrelation and the KPSS level-stationarity test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, InsufficientDataError
from .series import ReturnSeries, is_constant

__all__ = ["Acf1Result", "KpssResult", "acf1", "kpss", "kpss_verdict", "kpss_bandwidth",
           "KPSS_CRIT_5PCT", "KPSS_CRIT_1PCT"]

# Level-stationarity critical values (Kwiatkowski et al. 1992, Table 1).
KPSS_CRIT_5PCT = 0.463
KPSS_CRIT_1PCT = 0.739

P_ABOVE_5 = "p>0.05"
P_BETWEEN = "0.01<p<0.05"
P_BELOW_1 = "p<0.01"


@dataclass(frozen=True)
class Acf1Result:
    rho1: float


@dataclass(frozen=True)
class KpssResult:
    statistic: float
    bandwidth: int
    verdict: str

    @property
    def rejects_at_5pct(self) -> bool:
        return self.verdict != P_ABOVE_5


def _values(x) -> np.ndarray:
    return x.values if isinstance(x, ReturnSeries) else np.asarray(x, dtype=float)


def acf1(returns) -> Acf1Result:
    """Sample lag-1 autocorrelation with the full-sample variance in the denominator."""
    x = _values(returns)
    if x.size < 3:
        raise InsufficientDataError(f"acf1 needs T >= 3, got {x.size}")
    if is_constant(x):
        raise DegenerateFitError("acf1: zero sample variance")
    d = x - x.mean()
    return Acf1Result(float(np.dot(d[:-1], d[1:]) / np.dot(d, d)))


def kpss_verdict(statistic: float) -> str:
    if statistic >= KPSS_CRIT_1PCT:
        return P_BELOW_1
    if statistic >= KPSS_CRIT_5PCT:
        return P_BETWEEN
    return P_ABOVE_5


def kpss_bandwidth(t: int) -> int:
    """Short Newey-West rule floor(4 (T/100)^(1/4))."""
    return int(math.floor(4.0 * (t / 100.0) ** 0.25))


def kpss(returns, bandwidth: int | None = None) -> KpssResult:
    x = _values(returns)
    t = x.size
    if t < 50:
        raise InsufficientDataError(f"KPSS needs T >= 50, got {t}")
    if is_constant(x):
        raise DegenerateFitError("KPSS: zero sample variance")
    lags = kpss_bandwidth(t) if bandwidth is None else int(bandwidth)
    if not 0 <= lags < t:
        raise ValueError(f"KPSS bandwidth must be in [0, T), got {lags}")
    e = x - x.mean()
    s = np.cumsum(e)
    lrv = float(np.dot(e, e)) / t
    for h in range(1, lags + 1):
        lrv += 2.0 * (1.0 - h / (lags + 1.0)) * float(np.dot(e[h:], e[:-h])) / t
    stat = float(np.dot(s, s)) / (t * t * lrv)
    return KpssResult(stat, lags, kpss_verdict(stat))
