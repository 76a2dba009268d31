"""Laurent polynomials with complex coefficients.

A :class:`LaurentPolynomial` stores a dense coefficient vector together with
the exponent ``low`` of its first entry, so ``coeffs[j]`` multiplies
``z**(low + j)``.  Masks, symbols, sub-symbols and Bezout cofactors all use
this one carrier.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeZero, ZeroArgument, ZeroPolynomial

TRIM_TOL = 1e-13
REAL_TOL = 1e-12
COPRIME_THRESHOLD = 1e-8


def _trim(coeffs, low, tol):
    nz = np.flatnonzero(np.abs(coeffs) > tol)
    if nz.size == 0:
        return np.zeros(0, dtype=complex), 0
    return coeffs[nz[0]:nz[-1] + 1], low + int(nz[0])


@dataclass(frozen=True, eq=False)
class LaurentPolynomial:
    """Immutable Laurent polynomial ``sum_j coeffs[j] * z**(low + j)``.

    Leading and trailing coefficients with magnitude ``<= tol`` are trimmed on
    construction; the zero polynomial has empty ``coeffs`` and ``low == 0``.
    """

    coeffs: np.ndarray
    low: int = 0
    tol: float = field(default=TRIM_TOL, repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        c, low = _trim(c, int(self.low), self.tol)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "low", low)

    # --- constructors -------------------------------------------------
    @classmethod
    def zero(cls):
        return cls([], 0)

    @classmethod
    def constant(cls, c):
        return cls([c], 0)

    @classmethod
    def monomial(cls, k, c=1.0):
        return cls([c], k)

    @classmethod
    def from_roots(cls, roots, leading=1.0):
        """``leading * prod (z - r)`` over ``roots`` (repeat a root for multiplicity)."""
        c = np.array([leading], dtype=complex)
        for r in roots:
            c = np.convolve(c, np.array([-r, 1.0], dtype=complex))
        return cls(c, 0)

    # --- shape --------------------------------------------------------
    @property
    def high(self):
        """Exponent of the last stored coefficient (``low + len - 1``)."""
        return self.low + len(self.coeffs) - 1

    @property
    def span(self):
        return max(len(self.coeffs) - 1, 0)

    @property
    def degree(self):
        return self.high

    def is_zero(self):
        return len(self.coeffs) == 0

    def coeff(self, k):
        j = k - self.low
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return 0j

    def dense(self, lo, hi):
        """Coefficients for exponents ``lo..hi`` inclusive, zero padded."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        for k in range(max(lo, self.low), min(hi, self.high) + 1):
            out[k - lo] = self.coeffs[k - self.low]
        return out

    def is_real(self, tol=REAL_TOL):
        return bool(np.all(np.abs(self.coeffs.imag) <= tol))

    def realify(self, tol=REAL_TOL):
        """Drop imaginary parts; raise if any exceeds ``tol``."""
        if not self.is_real(tol):
            worst = float(np.max(np.abs(self.coeffs.imag)))
            raise ValueError(f"imaginary part {worst:.3e} exceeds {tol:.0e}")
        return LaurentPolynomial(self.coeffs.real, self.low, self.tol)

    # --- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        return LaurentPolynomial(self.dense(lo, hi) + other.dense(lo, hi), lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(-self.coeffs, self.low, self.tol)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, LaurentPolynomial):
            return multiply(self, other)
        return LaurentPolynomial(self.coeffs * complex(other), self.low, self.tol)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return LaurentPolynomial(self.coeffs / complex(scalar), self.low, self.tol)

    def shift(self, k):
        """Multiply by ``z**k``."""
        return LaurentPolynomial(self.coeffs, self.low + k, self.tol)

    def reflect(self):
        """The polynomial ``p(-z)``."""
        if self.is_zero():
            return self
        signs = (-1.0) ** np.arange(self.low, self.high + 1)
        return LaurentPolynomial(self.coeffs * signs, self.low, self.tol)

    def reverse(self):
        """The polynomial ``p(1/z)``."""
        return LaurentPolynomial(self.coeffs[::-1], -self.high, self.tol)

    def __call__(self, z, r=0):
        return evaluate(self, z, r)

    def allclose(self, other, atol=1e-12):
        return max_coeff_diff(self, other) <= atol

    def __repr__(self):
        body = ", ".join(f"{c.real:.6g}" if abs(c.imag) < 1e-15 else f"{c:.6g}" for c in self.coeffs)
        return f"LaurentPolynomial(low={self.low}, coeffs=[{body}])"

    # --- serialization ------------------------------------------------
    def to_json(self):
        return {"low": int(self.low), "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        coeffs = []
        for c in obj["coeffs"]:
            if isinstance(c, (list, tuple)):
                coeffs.append(complex(c[0], c[1] if len(c) > 1 else 0.0))
            else:
                coeffs.append(complex(c))
        return cls(coeffs, int(obj.get("low", 0)))


def _coerce(x):
    if isinstance(x, LaurentPolynomial):
        return x
    return LaurentPolynomial.constant(x)


def max_coeff_diff(p, q):
    """Largest coefficientwise magnitude of ``p - q`` (no trimming applied)."""
    lo = min(p.low if not p.is_zero() else q.low, q.low if not q.is_zero() else p.low)
    hi = max(p.high if not p.is_zero() else q.high, q.high if not q.is_zero() else p.high)
    if hi < lo:
        return 0.0
    d = p.dense(lo, hi) - q.dense(lo, hi)
    return float(np.max(np.abs(d))) if d.size else 0.0


def multiply(p, q):
    """Coefficient convolution; exponents add."""
    if p.is_zero() or q.is_zero():
        return LaurentPolynomial.zero()
    return LaurentPolynomial(np.convolve(p.coeffs, q.coeffs), p.low + q.low)


def _falling(e, r):
    out = np.ones(len(e))
    for s in range(r):
        out = out * (e - s)
    return out


def evaluate(p, z, r=0):
    """Value of the ``r``-th derivative of ``p`` at ``z`` (scalar or array).

    Term-by-term differentiation with falling-factorial weights, then Horner.
    """
    if r < 0:
        raise ValueError("derivative order must be non-negative")
    za = np.asarray(z, dtype=complex)
    if p.is_zero():
        return np.zeros_like(za) if za.ndim else 0j
    e = np.arange(p.low, p.high + 1)
    w = _falling(e.astype(float), r) * p.coeffs
    # terms 0 <= e < r vanish identically
    s0 = 0 if p.low < 0 else max(0, r - p.low)
    w = w[s0:]
    emin = p.low + s0 - r
    if w.size == 0:
        return np.zeros_like(za) if za.ndim else 0j
    if np.any(za == 0) and emin < 0:
        raise ZeroArgument("negative exponent evaluated at z=0")
    val = np.polyval(w[::-1], za) * za ** emin
    return val if za.ndim else complex(val)


def sub_symbols(p):
    """Even and odd sub-symbols with ``even(z**2) + z * odd(z**2) == p(z)``."""
    if p.is_zero():
        return LaurentPolynomial.zero(), LaurentPolynomial.zero()
    start = p.low
    # first even exponent >= low
    e0 = start if start % 2 == 0 else start + 1
    o0 = start if start % 2 != 0 else start + 1
    even = p.coeffs[e0 - start::2]
    odd = p.coeffs[o0 - start::2]
    return (LaurentPolynomial(even, e0 // 2, p.tol), LaurentPolynomial(odd, (o0 - 1) // 2, p.tol))


def is_interpolatory(p, tol=1e-9):
    """Check ``p(z) + p(-z) == 2``.

    Returns ``(flag, residual)`` where ``residual`` is the largest coefficient
    magnitude of ``p(z) + p(-z) - 2``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    one = LaurentPolynomial.constant(1.0)
    if p.is_zero():
        return False, 2.0
    lo, hi = min(p.low, 0), max(p.high, 0)
    d = p.dense(lo, hi) + p.reflect().dense(lo, hi) - 2 * one.dense(lo, hi)
    res = float(np.max(np.abs(d)))
    return res <= tol, res


def shift_normalize(p):
    """Return ``(z**kappa * p, kappa)`` with the result starting at ``z**0``."""
    if p.is_zero():
        raise ZeroPolynomial("cannot normalize the zero polynomial")
    kappa = -p.low
    return p.shift(kappa), kappa


def resultant_matrices(a_hat):
    """Striped Toeplitz blocks ``(R_plus_block, R_minus_block)`` of ``a_hat``.

    ``a_hat`` must start at ``z**0`` and have degree ``n >= 1``.  Each block is
    ``2n x n``; column ``j`` is the coefficient vector of ``a_hat(z)`` (resp.
    ``a_hat(-z)``) shifted down by ``j`` rows.
    """
    if a_hat.is_zero():
        raise ZeroPolynomial("zero symbol")
    if a_hat.low != 0:
        raise ValueError("symbol must be shift-normalized (low == 0)")
    n = a_hat.high
    if n < 1:
        raise DegreeZero("symbol has degree 0")
    a = a_hat.dense(0, n)
    am = a * (-1.0) ** np.arange(n + 1)
    Rp = np.zeros((2 * n, n), dtype=complex)
    Rm = np.zeros((2 * n, n), dtype=complex)
    for j in range(n):
        Rp[j:j + n + 1, j] = a
        Rm[j:j + n + 1, j] = am
    return Rp, Rm


def coprime_margin(a_hat):
    """Singular-value ratio ``s_min / s_max`` of the resultant of ``a_hat(z), a_hat(-z)``.

    Zero (to rounding) exactly when the two polynomials share a root.
    """
    Rp, Rm = resultant_matrices(a_hat)
    s = np.linalg.svd(np.hstack([Rp, Rm]), compute_uv=False)
    if s[0] == 0:
        return 0.0
    return float(s[-1] / s[0])


def power(base, k):
    """``base**k`` for a non-negative integer ``k`` by repeated convolution."""
    out = LaurentPolynomial.constant(1.0)
    for _ in range(k):
        out = out * base
    return out
