"""Scaling points and the log-log least-squares fit shared by all estimators."""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateFitError, InsufficientPointsError, RegressionUndefinedError


class ScalingPoint(NamedTuple):
    scale: float
    fluctuation: float


class LineFit(NamedTuple):
    slope: float
    intercept: float
    r2: float


def ols(x: Sequence[float], y: Sequence[float]) -> LineFit:
    """Ordinary least squares of y on x with intercept."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    sxx = float(np.dot(xc, xc))
    if sxx == 0.0:
        raise RegressionUndefinedError("regressor has zero spread")
    yc = y - y.mean()
    slope = float(np.dot(xc, yc)) / sxx
    intercept = float(y.mean() - slope * x.mean())
    syy = float(np.dot(yc, yc))
    if syy == 0.0:
        r2 = 1.0
    else:
        resid = yc - slope * xc
        r2 = 1.0 - float(np.dot(resid, resid)) / syy
    return LineFit(slope, intercept, r2)


def fit_power_law(points: Sequence[ScalingPoint], min_points: int = 3) -> LineFit:
    """Fit ``ln(fluctuation) = intercept + slope * ln(scale)``.

    ``min_points`` is lowered to 2 only by the two-scale variogram estimators.
    """
    if len(points) < min_points:
        raise InsufficientPointsError(f"need at least {min_points} scaling points, got {len(points)}")
    scales = np.array([p.scale for p in points], dtype=float)
    fluct = np.array([p.fluctuation for p in points], dtype=float)
    if np.any(scales <= 0):
        raise DegenerateFitError("scales must be positive")
    if np.any(~(fluct > 0)) or not np.all(np.isfinite(fluct)):
        raise DegenerateFitError("zero or non-finite fluctuation in scaling points")
    return ols(np.log(scales), np.log(fluct))


def points_from(scales, fluctuations) -> tuple[ScalingPoint, ...]:
    return tuple(ScalingPoint(float(s), float(f)) for s, f in zip(scales, fluctuations))


def check_fluctuations(fluct: np.ndarray, reference: float, method: str) -> None:
    """Raise when a fluctuation is numerically zero relative to ``reference``.

    ``reference`` is the squared magnitude of the input path; values below
    ``(1e-12)**2`` of it are rounding residue, not signal.
    """
    floor = (1e-12) ** 2 * reference
    if not math.isfinite(reference) or reference <= 0 or np.any(fluct <= floor):
        raise DegenerateFitError(f"{method}: zero fluctuation at one or more scales")
