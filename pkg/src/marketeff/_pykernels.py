"""Pure numpy implementations of the hot kernels.

Same contract as the compiled ``_ckernels`` module; selected automatically by
:mod:`marketeff.kernels` when the extension is unavailable.
"""

from __future__ import annotations

import numpy as np


def poly_basis(s: int, order: int) -> np.ndarray:
    """Orthonormal basis (s x order+1) of polynomials of degree <= order on 0..s-1."""
    x = np.arange(s, dtype=float) - (s - 1) / 2.0
    q, _ = np.linalg.qr(np.vander(x, order + 1, increasing=True))
    return np.ascontiguousarray(q)


def dfa_fluctuations(profile: np.ndarray, scales: np.ndarray, order: int) -> np.ndarray:
    """Mean squared polynomial-fit residual over 2*floor(T/s) boxes per scale.

    Boxes are cut from the front and from the back of the profile so no
    sample is dropped when s does not divide T.
    """
    y = np.ascontiguousarray(profile, dtype=float)
    n = y.size
    out = np.empty(len(scales))
    for idx, s in enumerate(scales):
        s = int(s)
        nb = n // s
        boxes = np.concatenate([y[: nb * s].reshape(nb, s), y[n - nb * s :].reshape(nb, s)])
        boxes = boxes - boxes.mean(axis=1, keepdims=True)
        q = poly_basis(s, order)
        resid = boxes - (boxes @ q) @ q.T
        out[idx] = np.mean(resid * resid)
    return out


def dma_fluctuations(profile: np.ndarray, windows: np.ndarray) -> np.ndarray:
    """Mean squared deviation from the centred moving average, per odd window."""
    y = np.ascontiguousarray(profile, dtype=float)
    out = np.empty(len(windows))
    for idx, lam in enumerate(windows):
        lam = int(lam)
        half = (lam - 1) // 2
        ma = np.lib.stride_tricks.sliding_window_view(y, lam).mean(axis=1)
        dev = y[half : y.size - half] - ma
        out[idx] = np.mean(dev * dev)
    return out


def _first_not_below(y, lo, hi, pivot, strict):
    # per row i: first j in [lo_i, hi_i) with y[j]-y[i] >= pivot (strict) or > pivot
    a = lo.copy()
    b = hi.copy()
    while True:
        rows = np.flatnonzero(a < b)
        if rows.size == 0:
            return a
        m = (a[rows] + b[rows]) // 2
        d = y[m] - y[rows]
        below = d < pivot if strict else d <= pivot
        a[rows] = np.where(below, m + 1, a[rows])
        b[rows] = np.where(below, b[rows], m)


def _weighted_median(values, weights):
    order = np.argsort(values, kind="stable")
    cw = np.cumsum(weights[order])
    return values[order[np.searchsorted(2 * cw, cw[-1])]]


def select_pairwise_difference(y_sorted: np.ndarray, k: int) -> float:
    """k-th smallest (1-based) of ``y[j] - y[i]`` over all pairs i < j.

    ``y_sorted`` must be ascending. Each row of the implicit difference matrix
    is monotone, so candidates are narrowed by per-row index ranges around a
    weighted-median pivot until few enough remain to select directly.
    """
    y = np.ascontiguousarray(y_sorted, dtype=float)
    n = y.size
    npairs = n * (n - 1) // 2
    if not 1 <= k <= npairs:
        raise ValueError(f"k={k} outside 1..{npairs}")
    rows = np.arange(n)
    lo = rows + 1
    hi = np.full(n, n)
    below = 0
    while True:
        width = hi - lo
        total = int(width.sum())
        if total <= n:
            active = np.flatnonzero(width > 0)
            w = width[active]
            row_idx = np.repeat(active, w)
            starts = np.repeat(np.cumsum(w) - w, w)
            cols = np.repeat(lo[active], w) + (np.arange(total) - starts)
            vals = y[cols] - y[row_idx]
            r = k - below - 1
            return float(np.partition(vals, r)[r])
        active = np.flatnonzero(width > 0)
        mid = lo[active] + width[active] // 2
        pivot = _weighted_median(y[mid] - y[active], width[active])
        p_lt = _first_not_below(y, lo, hi, pivot, strict=True)
        p_le = _first_not_below(y, lo, hi, pivot, strict=False)
        n_lt = below + int((p_lt - lo).sum())
        n_le = below + int((p_le - lo).sum())
        if k <= n_lt:
            hi = p_lt
        elif k > n_le:
            lo = p_le
            below = n_le
        else:
            return float(pivot)
