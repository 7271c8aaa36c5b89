"""Fractal dimension of a path from four estimators.

All estimators take the profile (integrated log-price path) and return D in
the raw and clamped [1, 2] form. For a self-affine path D = 2 - H.

Hall-Wood
    A(l) = (l/N) * sum_i |X(i l) - X((i-1) l)| for l in {1, 2};
    D = 2 - slope of ln A on ln l.
Genton
    robust variogram V(l) = Qn(lag-l increments)^2 for l in {1, 2};
    D = 2 - slope / 2.
Periodogram
    raw periodogram of the end-matched path at the lowest m = floor(N**(2/3))
    Fourier frequencies; spectral exponent alpha = -slope of ln I on ln omega;
    D = (5 - alpha) / 2.
Wavelet
    variance of Daubechies-4 detail coefficients (periodic boundary) at dyadic
    levels 1..floor(log2 N) - 3, levels with fewer than 8 coefficients dropped;
    beta = slope of log2 variance on level, H = (beta - 1) / 2, D = 2 - H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from . import kernels
from .errors import DegenerateFitError, InsufficientDataError
from .scaling import ScalingPoint, check_fluctuations, fit_power_law, points_from
from .series import Profile, is_constant

__all__ = [
    "FractalEstimate",
    "fd_hall_wood",
    "fd_genton",
    "fd_periodogram",
    "fd_wavelet",
    "qn_scale",
    "dwt_details",
    "DAUBECHIES4",
]

MIN_T = 100
VARIOGRAM_LAGS = (1, 2)
PERIODOGRAM_EXPONENT = 2.0 / 3.0
WAVELET_LEVEL_OFFSET = 3
WAVELET_MIN_COEFFS = 8

_S3 = math.sqrt(3.0)
DAUBECHIES4 = np.array([1 + _S3, 3 + _S3, 3 - _S3, 1 - _S3]) / (4 * math.sqrt(2.0))

# Qn consistency factor at the Gaussian: 1 / (sqrt(2) * Phi^-1(5/8))
QN_GAUSS = 1.0 / (math.sqrt(2.0) * NormalDist().inv_cdf(0.625))


@dataclass(frozen=True)
class FractalEstimate:
    method: str
    d_raw: float
    points: tuple[ScalingPoint, ...]

    @property
    def d_clamped(self) -> float:
        return min(2.0, max(1.0, self.d_raw))


def _checked_path(path, method: str) -> np.ndarray:
    y = path.values if isinstance(path, Profile) else np.ascontiguousarray(path, dtype=float)
    if y.ndim != 1 or y.size < MIN_T:
        raise InsufficientDataError(f"{method}: need a path of length >= {MIN_T}, got {y.size}")
    if is_constant(y):
        raise DegenerateFitError(f"{method}: constant path has no roughness")
    return y


def qn_scale(x) -> float:
    """Rousseeuw-Croux Qn scale: the k-th order statistic of pairwise distances.

    k = C(h, 2) with h = floor(n/2) + 1, times the Gaussian consistency factor.
    No small-sample correction is applied.
    """
    y = np.sort(np.asarray(x, dtype=float))
    n = y.size
    if n < 2:
        raise InsufficientDataError("Qn needs at least 2 observations")
    h = n // 2 + 1
    k = h * (h - 1) // 2
    return QN_GAUSS * kernels.select_pairwise_difference(y, k)


def fd_hall_wood(path) -> FractalEstimate:
    y = _checked_path(path, "HallWood")
    n = y.size
    amp = []
    for lag in VARIOGRAM_LAGS:
        grid = y[::lag]
        amp.append(lag / n * math.fsum(np.abs(np.diff(grid)).tolist()))
    amp = np.array(amp)
    check_fluctuations(amp**2, float(np.mean(y * y)), "HallWood")
    points = points_from(VARIOGRAM_LAGS, amp)
    return FractalEstimate("HallWood", 2.0 - fit_power_law(points, min_points=2).slope, points)


def fd_genton(path) -> FractalEstimate:
    y = _checked_path(path, "Genton")
    var = np.array([qn_scale(y[lag:] - y[:-lag]) ** 2 for lag in VARIOGRAM_LAGS])
    check_fluctuations(var, float(np.mean(y * y)), "Genton")
    points = points_from(VARIOGRAM_LAGS, var)
    return FractalEstimate("Genton", 2.0 - fit_power_law(points, min_points=2).slope / 2.0, points)


def fd_periodogram(path, *, exponent: float = PERIODOGRAM_EXPONENT) -> FractalEstimate:
    """Periodogram estimator; scales are stored as periods N/j (ascending)."""
    y = _checked_path(path, "Periodogram")
    n = y.size
    t = np.arange(n)
    # end-matching: remove the chord through the endpoints, then the mean
    z = y - y[0] - (y[-1] - y[0]) * t / (n - 1)
    z = z - z.mean()
    m = min(int(math.floor(n**exponent)), n // 2)
    if m < 3:
        raise InsufficientDataError(f"Periodogram: only {m} frequencies below the cutoff")
    power = np.abs(np.fft.rfft(z)[1 : m + 1]) ** 2 / n
    check_fluctuations(power, float(np.sum(z * z)), "Periodogram")
    j = np.arange(m, 0, -1)
    points = points_from(n / j, power[::-1])
    slope = fit_power_law(points).slope  # slope on ln(period) = spectral exponent
    return FractalEstimate("Periodogram", (5.0 - slope) / 2.0, points)


def dwt_details(x, levels: int, wavelet: np.ndarray = DAUBECHIES4) -> list[np.ndarray]:
    """Detail coefficients at levels 1..levels of a periodic orthogonal DWT.

    An odd-length approximation drops its last sample before the next level.
    """
    h = np.asarray(wavelet, dtype=float)
    taps = h.size
    g = h[::-1] * np.where(np.arange(taps) % 2 == 0, 1.0, -1.0)
    a = np.asarray(x, dtype=float)
    out = []
    for _ in range(levels):
        n = a.size - a.size % 2
        if n < 2:
            break
        a = a[:n]
        idx = (2 * np.arange(n // 2)[:, None] + np.arange(taps)[None, :]) % n
        win = a[idx]
        out.append(win @ g)
        a = win @ h
    return out


def fd_wavelet(path, *, level_offset: int = WAVELET_LEVEL_OFFSET,
               min_coeffs: int = WAVELET_MIN_COEFFS) -> FractalEstimate:
    y = _checked_path(path, "Wavelet")
    levels = int(math.floor(math.log2(y.size))) - level_offset
    details = dwt_details(y, levels)
    scales, var = [], []
    for j, d in enumerate(details, start=1):
        if d.size >= min_coeffs:
            scales.append(2.0**j)
            var.append(float(np.mean(d * d)))
    if len(var) < 3:
        raise InsufficientDataError(f"Wavelet: only {len(var)} usable levels")
    var = np.array(var)
    check_fluctuations(var, float(np.mean(y * y)), "Wavelet")
    points = points_from(scales, var)
    # slope of ln var on ln 2^j equals slope of log2 var on j
    beta = fit_power_law(points).slope
    return FractalEstimate("Wavelet", 2.0 - (beta - 1.0) / 2.0, points)
