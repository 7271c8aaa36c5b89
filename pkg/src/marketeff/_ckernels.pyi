import numpy as np
import numpy.typing as npt
from typing import Sequence

def dfa_fluctuations(
    profile: npt.NDArray[np.float64], scales: Sequence[int], order: int
) -> npt.NDArray[np.float64]: ...
def dma_fluctuations(
    profile: npt.NDArray[np.float64], windows: Sequence[int]
) -> npt.NDArray[np.float64]: ...
def select_pairwise_difference(y: npt.NDArray[np.float64], k: int) -> float: ...
