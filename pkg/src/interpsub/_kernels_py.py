"""Pure-Python/numpy versions of the hot kernels.

Same signatures and results as the compiled ``_kernels`` extension; used when
the extension is not built or ``INTERPSUB_PURE_PYTHON`` is set.
"""
import numpy as np


def refine_upsampled(q, mask, low, copy_even):
    """One subdivision step on a ``(L, d)`` float array.

    Returns the ``(2L - 1 + len(mask) - 1, d)`` array ``sum_j mask[i - 2j] q[j]``
    whose first row sits at index ``2*offset + low``.  With ``copy_even`` the
    slots at even global indices are filled by copying ``q`` (interpolatory
    masks), so they carry no rounding.
    """
    q = np.ascontiguousarray(q, dtype=float)
    mask = np.ascontiguousarray(mask, dtype=float)
    L, d = q.shape
    S = mask.shape[0]
    out = np.zeros((2 * L - 1 + S - 1, d))
    for s in range(S):
        if mask[s] != 0.0:
            out[s:s + 2 * L - 1:2] += mask[s] * q
    if copy_even:
        # global index of row r is 2*offset + low + r; even <=> (low + r) even
        first = low % 2
        out[first::2] = 0.0
        # q[j] lands at row 2j - low
        rows = 2 * np.arange(L) - low
        ok = (rows >= 0) & (rows < out.shape[0])
        out[rows[ok]] = q[ok]
    return out


def newton_coefficients(x, taylor, start):
    """Confluent divided differences ``f[x_0..x_j]`` for ``j = 0..N-1``.

    ``x`` lists the nodes with repetition, grouped; ``start[i]`` is the index
    where the group of ``x[i]`` begins and ``taylor[start[i] + r]`` holds the
    ``r``-th Taylor coefficient of ``f`` at that node.
    """
    x = np.asarray(x, dtype=complex)
    N = x.shape[0]
    col = np.array([taylor[start[i]] for i in range(N)], dtype=complex)
    coef = np.empty(N, dtype=complex)
    coef[0] = col[0]
    for j in range(1, N):
        new = np.empty(N - j, dtype=complex)
        for i in range(N - j):
            if start[i] == start[i + j]:
                new[i] = taylor[start[i] + j]
            else:
                new[i] = (col[i + 1] - col[i]) / (x[i + j] - x[i])
        col = new
        coef[j] = col[0]
    return coef


def newton_to_monomial(x, a):
    """Ascending monomial coefficients of ``sum_j a[j] prod_{i<j} (z - x[i])``."""
    N = len(a)
    p = np.zeros(N, dtype=complex)
    p[0] = a[N - 1]
    deg = 0
    for j in range(N - 2, -1, -1):
        # p <- p * (z - x[j]) + a[j]
        nxt = np.zeros(N, dtype=complex)
        nxt[1:deg + 2] = p[:deg + 1]
        nxt[:deg + 1] -= x[j] * p[:deg + 1]
        nxt[0] += a[j]
        p = nxt
        deg += 1
    return p
