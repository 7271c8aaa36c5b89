"""Efficiency Index: distance of eight bounded estimates from the efficient-market point.

Each measure M_i is normalised by its range R_i around its efficient value M_i*:

    EI = sqrt( sum_i ((M_i - M_i*) / R_i)^2 )

so EI = 0 for an efficient market and EI = sqrt(n)/2 when every measure sits
at a boundary. Fractal-dimension terms form the *local* part of EI^2, the
Hurst and autocorrelation terms the *global* part.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import fractal, hurst, stats
from .config import EstimatorConfig
from .errors import DegenerateFitError, EstimatorFailure, InsufficientDataError, MarketEffError, RegressionUndefinedError
from .scaling import LineFit, ols
from .series import DescriptiveStats, ReturnSeries, descriptive_stats, is_constant, profile

__all__ = [
    "MEASURES",
    "Measure",
    "MeasureVector",
    "EfficiencyReport",
    "Shares",
    "measure_vector",
    "efficiency_index",
    "decompose",
    "analyze",
    "rank",
    "dh_regression",
    "dh_regression_points",
]

MIN_T = 25
RECOMMENDED_T = 100

# name, efficient value, range, kind
MEASURES: tuple[tuple[str, float, float, str], ...] = (
    ("H_DFA", 0.5, 1.0, "global"),
    ("H_DMA", 0.5, 1.0, "global"),
    ("H_HHCA", 0.5, 1.0, "global"),
    ("D_P", 1.5, 1.0, "local"),
    ("D_W", 1.5, 1.0, "local"),
    ("D_G", 1.5, 1.0, "local"),
    ("D_HW", 1.5, 1.0, "local"),
    ("RHO1", 0.0, 2.0, "global"),
)
_TABLE = {name: (ideal, rng, kind) for name, ideal, rng, kind in MEASURES}
_BOUNDS = {"H": (0.0, 1.0), "D": (1.0, 2.0), "R": (-1.0, 1.0)}


@dataclass(frozen=True)
class Measure:
    name: str
    estimate: float
    ideal: float
    range: float
    kind: str
    raw: float | None = None

    @property
    def deviation(self) -> float:
        return (self.estimate - self.ideal) / self.range


@dataclass(frozen=True)
class MeasureVector:
    entries: tuple[Measure, ...]
    # estimator objects behind each entry, for reporting; not part of equality
    sources: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        names = tuple(e.name for e in self.entries)
        if names != tuple(m[0] for m in MEASURES):
            raise ValueError(f"measure vector needs entries {[m[0] for m in MEASURES]} in order, got {list(names)}")
        for e in self.entries:
            ideal, rng, kind = _TABLE[e.name]
            if (e.ideal, e.range, e.kind) != (ideal, rng, kind):
                raise ValueError(f"{e.name}: ideal/range/kind must be {ideal}/{rng}/{kind}")
            if abs(e.deviation) > 0.5 + 1e-15:
                raise ValueError(f"{e.name}: estimate {e.estimate} outside its bounds")

    @classmethod
    def from_estimates(cls, values: Mapping[str, float], raw: Mapping[str, float] | None = None,
                       sources: Mapping[str, Any] | None = None) -> MeasureVector:
        """Build from clamped-or-not estimates; values are clamped to each measure's support."""
        entries = []
        for name, ideal, rng, kind in MEASURES:
            lo, hi = _BOUNDS[name[0]]
            est = min(hi, max(lo, float(values[name])))
            entries.append(Measure(name, est, ideal, rng, kind, float((raw or values)[name])))
        return cls(tuple(entries), dict(sources or {}))

    def __getitem__(self, name: str) -> Measure:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def __iter__(self):
        return iter(self.entries)

    @property
    def mean_h(self) -> float:
        return float(np.mean([e.estimate for e in self.entries if e.name.startswith("H_")]))

    @property
    def mean_d(self) -> float:
        return float(np.mean([e.estimate for e in self.entries if e.name.startswith("D_")]))


class Shares(NamedTuple):
    local: float
    global_: float


def _squares(entries: Iterable[Measure]) -> list[tuple[str, float]]:
    return [(e.kind, e.deviation**2) for e in entries]


def efficiency_index(vector: MeasureVector | Sequence[Measure]) -> float:
    """Euclidean norm of range-normalised deviations (accepts any number of measures)."""
    return math.sqrt(math.fsum(sq for _, sq in _squares(vector)))


def decompose(vector: MeasureVector | Sequence[Measure]) -> Shares | None:
    """Local (fractal) and global (memory) shares of EI^2.

    Returns ``None`` for a fully efficient vector (EI = 0), where shares are
    undefined.
    """
    sq = _squares(vector)
    total = math.fsum(s for _, s in sq)
    if total == 0.0:
        return None
    local = math.fsum(s for kind, s in sq if kind == "local") / total
    return Shares(local, 1.0 - local)


def _run(name: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except MarketEffError as exc:
        raise EstimatorFailure(name, exc) from exc


def measure_vector(returns: ReturnSeries | Sequence[float] | np.ndarray,
                   config: EstimatorConfig | None = None) -> MeasureVector:
    """Run all eight estimators; the first failure is raised naming its method."""
    config = config or EstimatorConfig()
    x = returns.values if isinstance(returns, ReturnSeries) else np.asarray(returns, dtype=float)
    if x.size < MIN_T:
        raise InsufficientDataError(f"need T >= {MIN_T} returns for analysis, got {x.size}")
    if x.size < RECOMMENDED_T:
        warnings.warn(f"T={x.size} is below the recommended {RECOMMENDED_T}; estimates are unreliable",
                      stacklevel=2)
    if is_constant(x):
        raise EstimatorFailure("H_DFA", DegenerateFitError("constant returns"))
    path = profile(x)
    src = {
        "H_DFA": _run("H_DFA", hurst.dfa_combined, x, **config.dfa_params),
        "H_DMA": _run("H_DMA", hurst.dma_on_profile, path.values, windows=config.dma_windows),
        "H_HHCA": _run("H_HHCA", hurst.hhca_on_profile, path.values,
                       tau_max_range=(config.hhca_tau_max_min, config.hhca_tau_max_max)),
        "D_P": _run("D_P", fractal.fd_periodogram, path, exponent=config.periodogram_exponent),
        "D_W": _run("D_W", fractal.fd_wavelet, path, level_offset=config.wavelet_level_offset,
                    min_coeffs=config.wavelet_min_coeffs),
        "D_G": _run("D_G", fractal.fd_genton, path),
        "D_HW": _run("D_HW", fractal.fd_hall_wood, path),
        "RHO1": _run("RHO1", stats.acf1, x),
    }
    raw = {}
    for name, est in src.items():
        if name.startswith("H_"):
            raw[name] = est.h_raw
        elif name.startswith("D_"):
            raw[name] = est.d_raw
        else:
            raw[name] = est.rho1
    return MeasureVector.from_estimates(raw, raw, src)


@dataclass(frozen=True)
class EfficiencyReport:
    ticker: str
    t: int
    ei: float
    local_share: float | None
    global_share: float | None
    vector: MeasureVector
    stats: DescriptiveStats | None = None
    kpss: stats.KpssResult | None = None

    @property
    def fully_efficient(self) -> bool:
        return self.local_share is None

    @classmethod
    def from_vector(cls, ticker: str, t: int, vector: MeasureVector, desc=None, kpss=None) -> EfficiencyReport:
        shares = decompose(vector)
        return cls(ticker, t, efficiency_index(vector),
                   None if shares is None else shares.local,
                   None if shares is None else shares.global_,
                   vector, desc, kpss)

    def to_json_dict(self) -> dict:
        estimates = {}
        points = {}
        for e in self.vector:
            estimates[e.name] = {"raw": e.raw, "clamped": e.estimate}
            src = self.vector.sources.get(e.name)
            if isinstance(src, hurst.HurstEstimate):
                for leaf in src.leaves():
                    if leaf is not src:
                        estimates[f"H_{leaf.label}"] = {"raw": leaf.h_raw, "clamped": leaf.h_clamped,
                                                        "sub_estimates": list(leaf.sub_estimates)}
                    else:
                        estimates[e.name]["sub_estimates"] = list(leaf.sub_estimates)
                    points[leaf.label] = [[p.scale, p.fluctuation] for p in leaf.points]
            elif isinstance(src, fractal.FractalEstimate):
                points[src.method] = [[p.scale, p.fluctuation] for p in src.points]
        out = {
            "ticker": self.ticker,
            "t": self.t,
            "ei": self.ei,
            "local_share": self.local_share,
            "global_share": self.global_share,
            "mean_h": self.vector.mean_h,
            "mean_d": self.vector.mean_d,
            "estimates": estimates,
            "scaling_points": points,
            "stats": None,
            "kpss": None,
        }
        if self.stats is not None:
            s = self.stats
            out["stats"] = {"t": s.t, "mean": s.mean, "min": s.min, "max": s.max, "sd": s.sd,
                            "skewness": s.skewness, "excess_kurtosis": s.excess_kurtosis}
        if self.kpss is not None:
            out["kpss"] = {"statistic": self.kpss.statistic, "bandwidth": self.kpss.bandwidth,
                           "verdict": self.kpss.verdict}
        return out


def analyze(returns: ReturnSeries, config: EstimatorConfig | None = None) -> EfficiencyReport:
    """Full per-ticker report: measure vector, EI, shares, descriptive statistics and KPSS."""
    config = config or EstimatorConfig()
    vector = measure_vector(returns, config)
    desc = descriptive_stats(returns)
    kp = _run("KPSS", stats.kpss, returns, bandwidth=config.kpss_bandwidth)
    return EfficiencyReport.from_vector(returns.ticker, returns.t, vector, desc, kp)


def rank(reports: Iterable[EfficiencyReport]) -> list[EfficiencyReport]:
    """Most efficient first; equal EI falls back to ticker order."""
    reports = list(reports)
    if not reports:
        raise ValueError("rank needs at least one report")
    return sorted(reports, key=lambda r: (r.ei, r.ticker))


def dh_regression_points(mean_h: Sequence[float], mean_d: Sequence[float]) -> LineFit:
    if len(mean_h) < 3:
        raise RegressionUndefinedError(f"D-H regression needs at least 3 tickers, got {len(mean_h)}")
    return ols(mean_h, mean_d)


def dh_regression(reports: Sequence[EfficiencyReport]) -> LineFit:
    """OLS of mean fractal dimension on mean Hurst exponent across tickers."""
    return dh_regression_points([r.vector.mean_h for r in reports], [r.vector.mean_d for r in reports])
