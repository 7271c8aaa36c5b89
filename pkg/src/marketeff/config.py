"""Estimator parameters with their published defaults, and flat key=value config files."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import fractal, hurst


@dataclass(frozen=True)
class EstimatorConfig:
    dfa_s_min: int = hurst.DFA_S_MIN
    dfa_s_max_divisor: float = hurst.DFA_S_MAX_DIVISOR
    dfa_n_scales: int = hurst.DFA_N_SCALES
    dma_window_min: int = 3
    dma_window_max: int = 21
    dma_window_step: int = 2
    hhca_tau_max_min: int = hurst.HHCA_TAU_MAX[0]
    hhca_tau_max_max: int = hurst.HHCA_TAU_MAX[1]
    periodogram_exponent: float = fractal.PERIODOGRAM_EXPONENT
    wavelet_level_offset: int = fractal.WAVELET_LEVEL_OFFSET
    wavelet_min_coeffs: int = fractal.WAVELET_MIN_COEFFS
    kpss_bandwidth: int | None = None

    def __post_init__(self):
        problems = []
        if self.dfa_s_min < 4:
            problems.append("dfa_s_min must be >= 4 (quadratic detrending needs 4 points)")
        if self.dfa_s_max_divisor < 2:
            problems.append("dfa_s_max_divisor must be >= 2")
        if self.dfa_n_scales < 5:
            problems.append("dfa_n_scales must be >= 5")
        if self.dma_window_min < 3 or self.dma_window_min % 2 == 0:
            problems.append("dma_window_min must be odd and >= 3")
        if self.dma_window_step < 2 or self.dma_window_step % 2:
            problems.append("dma_window_step must be even and >= 2")
        if len(self.dma_windows) < 3:
            problems.append("DMA window grid needs at least 3 windows")
        if not 3 <= self.hhca_tau_max_min <= self.hhca_tau_max_max:
            problems.append("need 3 <= hhca_tau_max_min <= hhca_tau_max_max")
        if not 0 < self.periodogram_exponent < 1:
            problems.append("periodogram_exponent must lie in (0, 1)")
        if self.wavelet_level_offset < 0:
            problems.append("wavelet_level_offset must be >= 0")
        if self.wavelet_min_coeffs < 2:
            problems.append("wavelet_min_coeffs must be >= 2")
        if self.kpss_bandwidth is not None and self.kpss_bandwidth < 0:
            problems.append("kpss_bandwidth must be >= 0")
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def dma_windows(self) -> tuple[int, ...]:
        return tuple(range(self.dma_window_min, self.dma_window_max + 1, self.dma_window_step))

    @property
    def dfa_params(self) -> dict:
        return {"s_min": self.dfa_s_min, "s_max_divisor": self.dfa_s_max_divisor, "n_scales": self.dfa_n_scales}

    @classmethod
    def from_mapping(cls, values: dict) -> EstimatorConfig:
        """Build from string or typed values; unknown keys are ignored."""
        kwargs = {}
        for f in fields(cls):
            if f.name not in values or values[f.name] is None:
                continue
            kwargs[f.name] = _coerce(f.name, values[f.name], cls.__dataclass_fields__[f.name].default)
        return cls(**kwargs)

    def as_dict(self) -> dict:
        return asdict(self)


def _coerce(name, value, default):
    if not isinstance(value, str):
        return value
    text = value.strip()
    if name == "kpss_bandwidth":
        return None if text.lower() in ("", "auto", "none") else int(text)
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        if "/" in text:
            num, den = text.split("/", 1)
            return float(num) / float(den)
        return float(text)
    return text


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are skipped."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out
