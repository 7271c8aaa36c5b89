# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Contract mirrors ``marketeff._pykernels``."""

import numpy as np
cimport numpy as cnp

from marketeff._pykernels import poly_basis

cnp.import_array()


def dfa_fluctuations(const double[::1] profile, scales, int order):
    cdef Py_ssize_t n = profile.shape[0]
    cdef Py_ssize_t s, nb, box, start, t, k, kk
    cdef double mean, c, r, ss
    cdef double[::1, :] q
    cdef double[::1] buf
    cdef double[::1] out = np.empty(len(scales))
    cdef Py_ssize_t idx = 0
    for s_obj in scales:
        s = <Py_ssize_t>s_obj
        nb = n // s
        q = np.asfortranarray(poly_basis(s, order))
        kk = q.shape[1]
        buf = np.empty(s)
        ss = 0.0
        for box in range(2 * nb):
            start = box * s if box < nb else n - (box - nb + 1) * s
            mean = 0.0
            for t in range(s):
                mean += profile[start + t]
            mean /= s
            for t in range(s):
                buf[t] = profile[start + t] - mean
            for k in range(kk):
                c = 0.0
                for t in range(s):
                    c += q[t, k] * buf[t]
                for t in range(s):
                    buf[t] -= c * q[t, k]
            for t in range(s):
                r = buf[t]
                ss += r * r
        out[idx] = ss / (2.0 * nb * s)
        idx += 1
    return np.asarray(out)


def dma_fluctuations(const double[::1] profile, windows):
    cdef Py_ssize_t n = profile.shape[0]
    cdef Py_ssize_t lam, half, t, u
    cdef double acc, dev, ss
    cdef double[::1] out = np.empty(len(windows))
    cdef Py_ssize_t idx = 0
    for lam_obj in windows:
        lam = <Py_ssize_t>lam_obj
        half = (lam - 1) // 2
        ss = 0.0
        for t in range(half, n - half):
            acc = 0.0
            for u in range(t - half, t + half + 1):
                acc += profile[u]
            dev = profile[t] - acc / lam
            ss += dev * dev
        out[idx] = ss / (n - 2 * half)
        idx += 1
    return np.asarray(out)


cdef double _quickselect(double* a, Py_ssize_t n, Py_ssize_t k) noexcept nogil:
    # k-th smallest (0-based); reorders a in place
    cdef Py_ssize_t left = 0, right = n - 1, i, j, mid
    cdef double pivot, tmp
    while right > left:
        mid = left + (right - left) // 2
        if a[mid] < a[left]:
            tmp = a[mid]; a[mid] = a[left]; a[left] = tmp
        if a[right] < a[left]:
            tmp = a[right]; a[right] = a[left]; a[left] = tmp
        if a[right] < a[mid]:
            tmp = a[right]; a[right] = a[mid]; a[mid] = tmp
        pivot = a[mid]
        i = left
        j = right
        while i <= j:
            while a[i] < pivot:
                i += 1
            while a[j] > pivot:
                j -= 1
            if i <= j:
                tmp = a[i]; a[i] = a[j]; a[j] = tmp
                i += 1
                j -= 1
        if k <= j:
            right = j
        elif k >= i:
            left = i
        else:
            return a[k]
    return a[k]


cdef double _whimed(double* a, Py_ssize_t* w, Py_ssize_t n, double* scratch) noexcept nogil:
    # weighted high median; a and w are consumed
    cdef Py_ssize_t i, nn = n, kept
    cdef Py_ssize_t wtotal = 0, wrest = 0, wleft, wmid
    cdef double trial
    for i in range(n):
        wtotal += w[i]
    while True:
        for i in range(nn):
            scratch[i] = a[i]
        trial = _quickselect(scratch, nn, nn // 2)
        wleft = 0
        wmid = 0
        for i in range(nn):
            if a[i] < trial:
                wleft += w[i]
            elif a[i] == trial:
                wmid += w[i]
        kept = 0
        if 2 * (wrest + wleft) > wtotal:
            for i in range(nn):
                if a[i] < trial:
                    a[kept] = a[i]
                    w[kept] = w[i]
                    kept += 1
        elif 2 * (wrest + wleft + wmid) > wtotal:
            return trial
        else:
            for i in range(nn):
                if a[i] > trial:
                    a[kept] = a[i]
                    w[kept] = w[i]
                    kept += 1
            wrest += wleft + wmid
        nn = kept


def select_pairwise_difference(const double[::1] y, Py_ssize_t k):
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t npairs = n * (n - 1) // 2
    if k < 1 or k > npairs:
        raise ValueError(f"k={k} outside 1..{npairs}")
    cdef Py_ssize_t[::1] lo = np.arange(1, n + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] hi = np.full(n, n, dtype=np.intp)
    cdef Py_ssize_t[::1] p_lt = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] p_le = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t[::1] wts = np.empty(n, dtype=np.intp)
    cdef double[::1] cand = np.empty(n)
    cdef double[::1] scratch = np.empty(n)
    cdef Py_ssize_t below = 0, total, m, i, j, c, n_lt, n_le
    cdef double pivot, return_value = 0.0
    with nogil:
        while True:
            total = 0
            for i in range(n):
                total += hi[i] - lo[i]
            if total <= n:
                m = 0
                for i in range(n):
                    for j in range(lo[i], hi[i]):
                        cand[m] = y[j] - y[i]
                        m += 1
                return_value = _quickselect(&cand[0], m, k - below - 1)
                break
            m = 0
            for i in range(n):
                if hi[i] > lo[i]:
                    cand[m] = y[lo[i] + (hi[i] - lo[i]) // 2] - y[i]
                    wts[m] = hi[i] - lo[i]
                    m += 1
            pivot = _whimed(&cand[0], &wts[0], m, &scratch[0])
            # first column not below pivot is non-decreasing in the row index
            j = 0
            n_lt = below
            for i in range(n):
                if j < i + 1:
                    j = i + 1
                while j < n and y[j] - y[i] < pivot:
                    j += 1
                c = j
                if c < lo[i]:
                    c = lo[i]
                elif c > hi[i]:
                    c = hi[i]
                p_lt[i] = c
                n_lt += c - lo[i]
            j = 0
            n_le = below
            for i in range(n):
                if j < i + 1:
                    j = i + 1
                while j < n and y[j] - y[i] <= pivot:
                    j += 1
                c = j
                if c < lo[i]:
                    c = lo[i]
                elif c > hi[i]:
                    c = hi[i]
                p_le[i] = c
                n_le += c - lo[i]
            if k <= n_lt:
                for i in range(n):
                    hi[i] = p_lt[i]
            elif k > n_le:
                for i in range(n):
                    lo[i] = p_le[i]
                below = n_le
            else:
                return_value = pivot
                break
    return float(return_value)
