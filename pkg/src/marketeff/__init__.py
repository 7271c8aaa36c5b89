"""Capital-market efficiency from long memory, roughness and short memory.

Three Hurst exponent estimators (DFA, DMA, HHCA), four fractal dimension
estimators (periodogram, wavelet, Genton, Hall-Wood) and the lag-1
autocorrelation are combined into an Efficiency Index: the distance of the
range-normalised estimates from the efficient-market point.
"""

from .config import EstimatorConfig
from .efficiency import (
    EfficiencyReport,
    Measure,
    MeasureVector,
    analyze,
    decompose,
    dh_regression,
    efficiency_index,
    measure_vector,
    rank,
)
from .errors import (
    DegenerateFitError,
    EstimatorFailure,
    GenerationError,
    InsufficientDataError,
    InsufficientPointsError,
    MarketEffError,
    RegressionUndefinedError,
    RejectedInputError,
)
from .fractal import FractalEstimate, fd_genton, fd_hall_wood, fd_periodogram, fd_wavelet
from .hurst import HurstEstimate, dfa, dfa_combined, dma, hhca
from .kernels import BACKEND
from .scaling import ScalingPoint, fit_power_law
from .series import (
    PriceSeries,
    Profile,
    ReturnSeries,
    descriptive_stats,
    log_returns,
    profile,
    read_price_csv,
)
from .stats import acf1, kpss
from .synth import SynthSpec, generate, generate_ar1, generate_fgn

__version__ = "0.1.0"
