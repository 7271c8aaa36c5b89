"""Kernel backend selected at import.

The compiled extension is used when it imports; otherwise (or when the
``MARKETEFF_PURE_PYTHON`` environment variable is set to a non-empty value)
the numpy implementations take over. Both expose:

``dfa_fluctuations(profile, scales, order)``
``dma_fluctuations(profile, windows)``
``select_pairwise_difference(y_sorted, k)``
"""

import os

from . import _pykernels

if os.environ.get("MARKETEFF_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

dfa_fluctuations = _impl.dfa_fluctuations
dma_fluctuations = _impl.dma_fluctuations
select_pairwise_difference = _impl.select_pairwise_difference

__all__ = ["BACKEND", "dfa_fluctuations", "dma_fluctuations", "select_pairwise_difference"]
