"""Matrix-path solver for ``a(z) p(z) [+/-] a(-z) p(-z) = 2 z**(2i - l)``.

For a shift-normalized symbol ``a`` of degree ``n`` the resultant matrices of
``(a(z), a(-z))`` are ``2n x 2n``.  A perfect-shuffle row permutation and the
column transform ``G`` split them into two ``n x n`` blocks, one of which
(``H-`` or ``H+``) carries the equations for ``p``: column ``i`` of its
inverse holds the ascending coefficients of ``p_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
import scipy.linalg as sla

from .errors import ResidualTooLarge, SingularSystem
from .laurent import (COPRIME_THRESHOLD, LaurentPolynomial, max_coeff_diff,
                      resultant_matrices)


def parse_star(star):
    if star in ("+", "plus", 1, "+1"):
        return "+"
    if star in ("-", "minus", -1, "-1"):
        return "-"
    raise ValueError(f"sign must be '+' or '-', got {star!r}")


def ell(star):
    """2 for '+', 1 for '-'."""
    return 2 if parse_star(star) == "+" else 1


def target_exponent(i, star):
    return 2 * i - ell(star)


def bezout_lhs(a_hat, p, star):
    """``a(z) p(z) [star] a(-z) p(-z)``."""
    q = a_hat * p
    if parse_star(star) == "+":
        return q + q.reflect()
    return q - q.reflect()


def bezout_residual(a_hat, p, i, star):
    """Largest coefficient of ``a p [star] a(-z) p(-z) - 2 z**(2i - l)``."""
    rhs = LaurentPolynomial.monomial(target_exponent(i, star), 2.0)
    return max_coeff_diff(bezout_lhs(a_hat, p, star), rhs)


@dataclass(frozen=True, eq=False)
class ResultantSystem:
    a_hat: LaurentPolynomial
    n: int
    star: str
    R_plus: np.ndarray
    R_minus: np.ndarray
    H_plus: Optional[np.ndarray] = None
    H_minus: Optional[np.ndarray] = None
    _lu: dict = field(default_factory=dict, repr=False)

    @property
    def m(self):
        return self.n - 1

    def H(self, star):
        return self.H_plus if parse_star(star) == "+" else self.H_minus

    def to_json(self):
        def arr(a):
            if a is None:
                return None
            return [[[float(x.real), float(x.imag)] for x in row] for row in a]
        return {"n": self.n, "star": self.star, "R_plus": arr(self.R_plus), "R_minus": arr(self.R_minus),
                "H_plus": arr(self.H_plus), "H_minus": arr(self.H_minus)}


def build_resultant(a_hat, star="-"):
    """Resultant matrices ``R+ = [R_p | R_m]`` and ``R- = [R_p | -R_m]``."""
    Rp, Rm = resultant_matrices(a_hat)
    n = a_hat.high
    return ResultantSystem(a_hat=a_hat, n=n, star=parse_star(star),
                           R_plus=np.hstack([Rp, Rm]), R_minus=np.hstack([Rp, -Rm]))


def half_matrix(a_hat, star):
    """``n x n`` stencil matrix: entry ``(r, c)`` is ``a_{2r+1-c}`` for '-', ``a_{2r-c}`` for '+'."""
    n = a_hat.high
    a = a_hat.dense(0, n)
    off = 1 if parse_star(star) == "-" else 0
    H = np.zeros((n, n), dtype=complex)
    for r in range(n):
        for c in range(n):
            s = 2 * r + off - c
            if 0 <= s <= n:
                H[r, c] = a[s]
    return H


def reduce_half(sys, verify=False):
    """Fill ``H_plus``/``H_minus`` from their stencils.

    With ``verify=True`` the full reductions are multiplied out and checked
    against the expected block structure (see :func:`block_structure_error`).
    """
    out = replace(sys, H_plus=half_matrix(sys.a_hat, "+"), H_minus=half_matrix(sys.a_hat, "-"), _lu={})
    if verify:
        err = block_structure_error(out)
        if err > 1e-12 * max(1.0, float(np.max(np.abs(sys.R_plus)))):
            raise AssertionError(f"block structure violated by {err:.3e}")
    return out


def perfect_shuffle(n):
    """Permutation matrix ``P`` with ``P[i, sigma(j)] = 1`` (odd rows of the input first)."""
    N = 2 * n
    P = np.zeros((N, N))
    for j in range(1, N + 1):
        s = (j + 1) // 2 + n if j % 2 else j // 2
        P[s - 1, j - 1] = 1.0
    return P


def g_matrix(n):
    D = np.diag((-1.0) ** np.arange(1, n + 1))
    I = np.eye(n)
    return np.block([[I, -D], [D, I]])


def reductions(sys):
    """``(P R- G^-1, P R+ G^-1)``."""
    P = perfect_shuffle(sys.n)
    Ginv = np.linalg.inv(g_matrix(sys.n))
    return P @ sys.R_minus @ Ginv, P @ sys.R_plus @ Ginv


def block_structure_error(sys):
    """Max deviation of the reductions from ``H- (+) H`` and anti-diagonal ``Hhat, H+``.

    The leading block of the first reduction must equal ``H-`` with zero
    off-diagonal blocks; the second reduction must have zero diagonal blocks
    and ``H+`` in the lower-left block.
    """
    n = sys.n
    A, B = reductions(sys)
    errs = [
        np.abs(A[:n, :n] - sys.H_minus).max(),
        np.abs(A[:n, n:]).max(),
        np.abs(A[n:, :n]).max(),
        np.abs(B[n:, :n] - sys.H_plus).max(),
        np.abs(B[:n, :n]).max(),
        np.abs(B[n:, n:]).max(),
    ]
    return float(max(errs))


def _factor(sys, star, threshold):
    star = parse_star(star)
    if star not in sys._lu:
        H = sys.H(star)
        if H is None:
            sys = reduce_half(sys)
            H = sys.H(star)
        s = np.linalg.svd(H, compute_uv=False)
        if s[0] == 0 or s[-1] / s[0] < threshold:
            raise SingularSystem(f"H{star} is numerically singular (ratio {s[-1] / max(s[0], 1e-300):.2e})")
        sys._lu[star] = sla.lu_factor(H)
    return sys._lu[star]


def solve_matrix(sys, i, star=None, threshold=COPRIME_THRESHOLD, check_tol=1e-9):
    """Cofactor ``p_i`` from column ``i`` of ``(H[star])^-1`` (``1 <= i <= n``).

    The LU factorization is cached on ``sys`` so a sweep over ``i`` reuses it.
    Raises :class:`SingularSystem` when ``H`` is numerically singular and
    :class:`ResidualTooLarge` if the solution misses the equation by more than
    ``check_tol`` times the symbol scale.
    """
    star = parse_star(star or sys.star)
    if not 1 <= i <= sys.n:
        raise IndexError(f"i={i} outside 1..{sys.n}")
    if sys.H(star) is None:
        sys = reduce_half(sys)
    lu = _factor(sys, star, threshold)
    e = np.zeros(sys.n, dtype=complex)
    e[i - 1] = 1.0
    p = LaurentPolynomial(sla.lu_solve(lu, e), 0)
    res = bezout_residual(sys.a_hat, p, i, star)
    scale = max(1.0, float(np.max(np.abs(sys.a_hat.coeffs))) * max(1.0, float(np.max(np.abs(p.coeffs)))))
    if check_tol is not None and res > check_tol * scale:
        raise ResidualTooLarge(f"matrix solve residual {res:.3e} for i={i}, star={star}")
    return p


def solve_family(sys, star=None, **kw):
    """All ``p_1..p_n`` for one sign, sharing a single factorization."""
    star = parse_star(star or sys.star)
    if sys.H(star) is None:
        sys = reduce_half(sys)
    return [solve_matrix(sys, i, star, **kw) for i in range(1, sys.n + 1)]


def solve(a_hat, i, star, **kw):
    """Convenience wrapper: build, reduce and solve in one call."""
    return solve_matrix(reduce_half(build_resultant(a_hat, star)), i, star, **kw)
