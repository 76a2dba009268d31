# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference versions."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def refine_upsampled(q, mask, long low, bint copy_even):
    cdef const double[:, ::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef const double[::1] mv = np.ascontiguousarray(mask, dtype=np.float64)
    cdef Py_ssize_t L = qv.shape[0], d = qv.shape[1], S = mv.shape[0]
    cdef Py_ssize_t M = 2 * L - 1 + S - 1
    out = np.zeros((M, d), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t j, s, c, r, first
    cdef double w
    for j in range(L):
        for s in range(S):
            w = mv[s]
            if w != 0.0:
                r = 2 * j + s
                for c in range(d):
                    ov[r, c] += w * qv[j, c]
    if copy_even:
        first = low % 2
        if first < 0:
            first += 2
        r = first
        while r < M:
            for c in range(d):
                ov[r, c] = 0.0
            r += 2
        for j in range(L):
            r = 2 * j - low
            if 0 <= r < M:
                for c in range(d):
                    ov[r, c] = qv[j, c]
    return out


def newton_coefficients(x, taylor, start):
    cdef const double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef const double complex[::1] tv = np.ascontiguousarray(taylor, dtype=np.complex128)
    cdef const long[::1] sv = np.ascontiguousarray(start, dtype=np.int64)
    cdef Py_ssize_t N = xv.shape[0], i, j
    col_a = np.empty(N, dtype=np.complex128)
    coef_a = np.empty(N, dtype=np.complex128)
    cdef double complex[::1] col = col_a
    cdef double complex[::1] coef = coef_a
    for i in range(N):
        col[i] = tv[sv[i]]
    coef[0] = col[0]
    for j in range(1, N):
        for i in range(N - j):
            if sv[i] == sv[i + j]:
                col[i] = tv[sv[i] + j]
            else:
                col[i] = (col[i + 1] - col[i]) / (xv[i + j] - xv[i])
        coef[j] = col[0]
    return coef_a


def newton_to_monomial(x, a):
    cdef const double complex[::1] xv = np.ascontiguousarray(x, dtype=np.complex128)
    cdef const double complex[::1] av = np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t N = av.shape[0], j, t, deg = 0
    p_a = np.zeros(N, dtype=np.complex128)
    cdef double complex[::1] p = p_a
    p[0] = av[N - 1]
    for j in range(N - 2, -1, -1):
        # in place: p <- p * (z - x[j]) + a[j]
        p[deg + 1] = p[deg]
        t = deg
        while t >= 1:
            p[t] = p[t - 1] - xv[j] * p[t]
            t -= 1
        p[0] = av[j] - xv[j] * p[0]
        deg += 1
    return p_a
