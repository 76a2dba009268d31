"""Root-path solver for the Bezout-like equation when the symbol is factored.

With ``a(z) = lead * prod (z - z_j)**k_j`` coprime with ``a(-z)``, the
cofactor ``p`` is pinned down by interpolation conditions at the zeros of
``a(z)`` and ``a(-z)``.  Three routes are provided:

``hermite``
    ``p`` as the Hermite interpolant of ``2 z**e / a(z)`` on the zeros of
    ``a(-z)``; the confluent divided differences are read off the first
    column of ``f(J)`` for the lower bidiagonal node matrix ``J``, which stays
    accurate when roots cluster;
``pfd``
    the closed partial-fraction formula, with the coefficients ``c_ij``
    obtained as Taylor coefficients of ``2 z**e / omega_i(z)`` at ``z_i``;
``ipfd``
    incomplete partial fractions: the cofactor ``k`` of
    ``1/(a(z)a(-z)) = h/a(z) + k/a(-z)`` by Hermite interpolation of
    ``1/a`` on the zeros of ``a(-z)``, then ``p`` as the Hermite interpolant of
    ``2 z**e k(z)`` on the same nodes;
``update``
    as ``ipfd`` but ``k`` is grown one linear factor at a time, falling back
    to the direct interpolation whenever a step is not admissible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bezout_matrix import bezout_lhs, bezout_residual, ell, parse_star, target_exponent
from .errors import CommonRoot, DuplicateNode, ResidualTooLarge
from .laurent import LaurentPolynomial, evaluate

ROOT_MERGE_TOL = 1e-7
COMMON_ROOT_TOL = 1e-10


def merge_roots(roots, tol=ROOT_MERGE_TOL):
    """Cluster ``(root, multiplicity)`` pairs closer than ``tol`` (relative).

    Clusters are replaced by their multiplicity-weighted mean, which perturbs
    the expanded polynomial only at second order in the cluster width.
    """
    groups = []
    for r, k in roots:
        r = complex(r)
        for g in groups:
            c = g[0] / g[1]
            if abs(r - c) <= tol * max(1.0, abs(c)):
                g[0] += r * k
                g[1] += k
                break
        else:
            groups.append([r * k, k])
    return tuple((s / k, k) for s, k in groups)


@dataclass(frozen=True)
class FactoredSymbol:
    """``leading * prod (z - root)**mult``; ``kappa`` is the shift used to normalize."""

    leading: complex
    roots: tuple
    kappa: int = 0

    @property
    def n(self):
        return sum(k for _, k in self.roots)

    def to_poly(self):
        flat = [r for r, k in self.roots for _ in range(k)]
        return LaurentPolynomial.from_roots(flat, self.leading)

    def common_root_gap(self):
        """``min |z_i + z_j|`` over all root pairs (including ``i == j``)."""
        zs = np.array([r for r, _ in self.roots])
        if zs.size == 0:
            return math.inf
        return float(np.min(np.abs(zs[:, None] + zs[None, :])))

    def check_coprime(self, tol=COMMON_ROOT_TOL):
        gap = self.common_root_gap()
        if gap < tol:
            raise CommonRoot(f"symbol and its reflection share a root (gap {gap:.2e})")


@dataclass(frozen=True)
class HermiteData:
    """Nodes ``(eta, h)`` and ``values[i][j] = f^(j)(eta_i)`` for ``j < h``."""

    nodes: tuple
    values: tuple

    @property
    def degree_bound(self):
        return sum(h for _, h in self.nodes) - 1

    @classmethod
    def from_taylor(cls, nodes, taylor):
        vals = tuple(tuple(complex(t) * math.factorial(j) for j, t in enumerate(row)) for row in taylor)
        return cls(tuple(nodes), vals)


def _check_nodes(nodes):
    etas = [complex(e) for e, _ in nodes]
    for a in range(len(etas)):
        for b in range(a + 1, len(etas)):
            if abs(etas[a] - etas[b]) <= 1e-14 * max(1.0, abs(etas[a])):
                raise DuplicateNode(f"nodes {a} and {b} coincide ({etas[a]})")


def hermite_newton(nodes, taylor):
    """Hermite interpolant from Taylor data ``taylor[i][r] = f^(r)(eta_i) / r!``.

    Newton form with repeated nodes, converted to ascending coefficients.
    """
    _check_nodes(nodes)
    x, t, start = [], [], []
    for (eta, h), row in zip(nodes, taylor):
        if len(row) < h:
            raise ValueError(f"node {eta} needs {h} Taylor coefficients, got {len(row)}")
        s = len(x)
        for r in range(h):
            x.append(complex(eta))
            t.append(complex(row[r]))
            start.append(s)
    if not x:
        return LaurentPolynomial.zero()
    x = np.array(x)
    a = kernels.newton_coefficients(x, np.array(t), np.array(start, dtype=np.int64))
    return LaurentPolynomial(kernels.newton_to_monomial(x, a), 0)


def hermite_lagrange(data):
    """Unique polynomial of degree ``<= r`` matching all prescribed derivatives."""
    taylor = [[complex(v) / math.factorial(j) for j, v in enumerate(row)] for row in data.values]
    return hermite_newton(data.nodes, taylor)


def rational_taylor(z0, factors, order, const=1.0):
    """Taylor coefficients ``g_0..g_{order-1}`` at ``z0`` of ``const * prod (z - r)**p``.

    ``factors`` is a list of ``(r, p)`` with integer (possibly negative) ``p``;
    no ``r`` may equal ``z0``.  Uses the logarithmic-derivative recursion
    ``(j+1) g_{j+1} = sum_a g_a L_{j-a}`` with
    ``L_j = (-1)**j sum p / (z0 - r)**(j+1)``.
    """
    z0 = complex(z0)
    d = np.array([z0 - complex(r) for r, _ in factors], dtype=complex)
    p = np.array([float(e) for _, e in factors])
    g = np.zeros(order, dtype=complex)
    if order == 0:
        return g
    g[0] = complex(const) * np.prod(d ** p) if len(factors) else complex(const)
    if order == 1:
        return g
    inv = 1.0 / d
    L = np.empty(order - 1, dtype=complex)
    powk = inv.copy()
    for j in range(order - 1):
        L[j] = (-1) ** j * np.sum(p * powk)
        powk = powk * inv
    for j in range(order - 1):
        g[j + 1] = np.dot(g[:j + 1], L[j::-1]) / (j + 1)
    return g


def pfd_coefficients(f, t, star):
    """Table ``c[i][j]`` (``j < k_i``) of Taylor coefficients of ``2 z**e / omega_i`` at ``z_i``.

    ``omega(z) = prod (z - z_l)**k_l (z + z_l)**k_l`` and
    ``omega_i = omega / (z - z_i)**k_i``; ``e = 2t - l``.
    """
    f.check_coprime()
    e = target_exponent(t, star)
    out = []
    for i, (zi, ki) in enumerate(f.roots):
        facs = [(0.0, e)]
        facs += [(zl, -kl) for l, (zl, kl) in enumerate(f.roots) if l != i]
        facs += [(-zl, -kl) for zl, kl in f.roots]
        out.append(rational_taylor(zi, facs, ki, const=2.0))
    return out


def _linear_power(root, k):
    """``(z - root)**k`` as ascending coefficients."""
    c = np.array([1.0 + 0j])
    for _ in range(k):
        c = np.convolve(c, [-root, 1.0])
    return c


def _solve_pfd(f, t, star):
    c = pfd_coefficients(f, t, star)
    n = f.n
    acc = np.zeros(n, dtype=complex)
    for i, (zi, ki) in enumerate(f.roots):
        base = np.array([1.0 + 0j])
        for l, (zl, kl) in enumerate(f.roots):
            if l != i:
                base = np.convolve(base, _linear_power(-zl, kl))
        inner = np.zeros(ki, dtype=complex)
        for s in range(1, ki + 1):
            term = (-1) ** s * c[i][ki - s] * _linear_power(-zi, ki - s)
            inner[:len(term)] += term
        prod = np.convolve(base, inner)
        acc[:len(prod)] += prod[:n]
    acc *= (-1) ** ell(star) / f.leading
    return LaurentPolynomial(acc, 0)


def _expand_nodes(nodes):
    return np.array([complex(eta) for eta, h in nodes for _ in range(h)])


def _bidiag_mul(x, v):
    """``J v`` for ``J`` with ``x`` on the diagonal and ones below it."""
    out = x * v
    out[1:] += v[:-1]
    return out


def _bidiag_solve(x, v, r):
    """``(J - r I)^-1 v`` by forward substitution."""
    out = np.empty_like(v)
    prev = 0j
    for j in range(len(v)):
        prev = (v[j] - prev) / (x[j] - r)
        out[j] = prev
    return out


def rational_divided_differences(x, factors, const=1.0):
    """Divided differences ``g[x_0..x_j]`` of ``const * prod (z - r)**p``.

    ``x`` lists nodes with repetition (grouped).  Uses the identity
    ``g(J) e_0 = (g[x_0], g[x_0, x_1], ...)``, evaluated with one bidiagonal
    product or solve per factor.
    """
    x = np.asarray(x, dtype=complex)
    v = np.zeros(len(x), dtype=complex)
    v[0] = complex(const)
    for r, p in factors:
        r = complex(r)
        for _ in range(abs(int(p))):
            if p > 0:
                v = _bidiag_mul(x, v) - r * v
            else:
                v = _bidiag_solve(x, v, r)
    return v


def polynomial_divided_differences(x, poly):
    """Divided differences of a polynomial (``low >= 0``) by Horner on ``J``."""
    x = np.asarray(x, dtype=complex)
    v = np.zeros(len(x), dtype=complex)
    if poly.is_zero():
        return v
    c = poly.dense(0, poly.high)
    for cj in c[::-1]:
        v = _bidiag_mul(x, v)
        v[0] += cj
    return v


def _apply_polynomial(x, poly, v):
    """``poly(J) v`` by Horner."""
    w = np.zeros_like(v)
    if poly.is_zero():
        return w
    for cj in poly.dense(0, poly.high)[::-1]:
        w = _bidiag_mul(x, w) + cj * v
    return w


def hermite_rational(nodes, factors, const=1.0):
    """Hermite interpolant of ``const * prod (z - r)**p`` on ``nodes``."""
    _check_nodes(nodes)
    x = _expand_nodes(nodes)
    a = rational_divided_differences(x, factors, const)
    return LaurentPolynomial(kernels.newton_to_monomial(x, a), 0)


def hermite_polynomial(nodes, poly):
    """Hermite interpolant (remainder mod the node polynomial) of ``poly``."""
    _check_nodes(nodes)
    x = _expand_nodes(nodes)
    a = polynomial_divided_differences(x, poly)
    return LaurentPolynomial(kernels.newton_to_monomial(x, a), 0)


def _solve_hermite(f, t, star, corrections=1):
    """Hermite solve plus ``corrections`` residual-correction steps.

    A right-hand side ``g`` of the right parity is solved by the Hermite
    interpolant of ``g / a``; the correction solves the same problem for the
    residual ``2 z**e - (a p [star] a(-z) p(-z))``.
    """
    e = target_exponent(t, star)
    nodes = _reflected_nodes(f)
    _check_nodes(nodes)
    x = _expand_nodes(nodes)
    inv = rational_divided_differences(x, _inverse_symbol_factors(f), 1.0 / f.leading)
    rhs = LaurentPolynomial.monomial(e, 2.0)
    newton = _apply_polynomial(x, rhs, inv)
    p = LaurentPolynomial(kernels.newton_to_monomial(x, newton), 0)
    a = f.to_poly()
    for _ in range(corrections):
        r = rhs - bezout_lhs(a, p, star)
        if r.is_zero():
            break
        delta = _apply_polynomial(x, r.shift(-min(r.low, 0)) if r.low < 0 else r, inv)
        p = p + LaurentPolynomial(kernels.newton_to_monomial(x, delta), 0)
    return p


def _poly_taylor(poly, z0, order):
    return [evaluate(poly, z0, r) / math.factorial(r) for r in range(order)]


def _reflected_nodes(f):
    return [(-zj, kj) for zj, kj in f.roots]


def _inverse_symbol_factors(f):
    return [(zl, -kl) for zl, kl in f.roots]


def incomplete_pfd_cofactor(f):
    """Cofactors ``(k, h)`` with ``1/(a(z) a(-z)) = h/a(z) + k/a(-z)``, both of degree ``< n``.

    ``k`` interpolates ``1/a`` (with multiplicity) on the zeros of ``a(-z)``;
    ``h = (1 - k a) / a(-z)``.
    """
    f.check_coprime()
    nodes = _reflected_nodes(f)
    inv = _inverse_symbol_factors(f)
    k = hermite_rational(nodes, inv, const=1.0 / f.leading)
    a = f.to_poly()
    h = _exact_divide(LaurentPolynomial.constant(1.0) - k * a, a.reflect())
    return k, h


def _exact_divide(num, den):
    """Quotient of polynomials (low == 0) whose remainder is known to vanish."""
    if num.is_zero():
        return num
    nd = num.dense(0, num.high)[::-1]
    dd = den.dense(0, den.high)[::-1]
    q, _ = np.polydiv(nd, dd)
    return LaurentPolynomial(np.atleast_1d(q)[::-1], 0)


def update_cofactor_linear(a_hat, k_old, r):
    """Cofactor for ``b(z) = a_hat(z) (z - r)`` from the one of ``a_hat``.

    ``k_old`` satisfies ``k_old a_hat = 1 mod a_hat(-z)``.  Returns ``k_new``
    (degree ``<= n``) with ``k_new b = 1 mod b(-z)``, written as
    ``k_1 + a_hat(-z) psi`` with a constant ``psi``.  Raises
    :class:`ValueError` when ``-r`` is already a zero of ``a_hat(-z)``
    (repeated root) or ``r`` is a zero of ``a_hat(-z)`` (lost coprimality).
    """
    r = complex(r)
    A = a_hat.reflect()
    A_at_r = evaluate(A, r)
    A_at_mr = evaluate(A, -r)
    scale = max(1.0, float(np.max(np.abs(a_hat.coeffs))))
    if abs(A_at_r) <= 1e-12 * scale or r == 0:
        raise ValueError("new factor is not coprime with the reflected symbol")
    if abs(A_at_mr) <= 1e-12 * scale:
        raise ValueError("repeated root: -r is already a node")
    n = a_hat.high
    Ad = A.dense(0, n)
    # synthetic division A(z) = (z - r) u(z) + A(r)
    u = np.zeros(max(n, 1), dtype=complex)
    acc = 0j
    for j in range(n, 0, -1):
        acc = acc * r + Ad[j]
        u[j - 1] = acc
    kd = k_old.dense(0, max(n - 1, 0)) if n >= 1 else np.zeros(1, dtype=complex)
    s = np.zeros(max(n, 1), dtype=complex)
    acc = 0j
    for j in range(len(kd) - 1, 0, -1):
        acc = acc * r + kd[j]
        s[j - 1] = acc
    k_at_r = evaluate(k_old, r) if not k_old.is_zero() else 0j
    k1 = LaurentPolynomial(s - (k_at_r / A_at_r) * u, 0) if n >= 1 else LaurentPolynomial.zero()
    b_at_mr = evaluate(a_hat, -r) * (-2.0 * r)
    k1_at_mr = evaluate(k1, -r) if not k1.is_zero() else 0j
    psi = (1.0 / b_at_mr - k1_at_mr) / A_at_mr
    return k1 + A * psi


def incremental_cofactor(f):
    """Build ``k`` one linear factor at a time; returns ``(k, n_fallbacks)``."""
    f.check_coprime()
    flat = [r for r, m in f.roots for _ in range(m)]
    a = LaurentPolynomial.constant(f.leading)
    k = LaurentPolynomial.zero()
    fallbacks = 0
    for idx, r in enumerate(flat):
        try:
            k = update_cofactor_linear(a, k, r)
            a = a * LaurentPolynomial([-r, 1.0], 0)
        except ValueError:
            a = a * LaurentPolynomial([-r, 1.0], 0)
            partial = FactoredSymbol(f.leading, merge_roots([(z, 1) for z in flat[:idx + 1]]))
            k, _ = incomplete_pfd_cofactor(partial)
            fallbacks += 1
    return k, fallbacks


def _second_step(f, k, t, star, corrections=1):
    """``p`` = Hermite interpolant of ``2 z**e k(z)`` on the zeros of ``a(-z)``.

    The product is never expanded: the divided differences of ``k`` are
    multiplied by ``z**e`` (and later by the residual) as polynomials in the
    node matrix.  ``corrections`` refinement steps follow.
    """
    e = target_exponent(t, star)
    nodes = _reflected_nodes(f)
    _check_nodes(nodes)
    x = _expand_nodes(nodes)
    kdd = polynomial_divided_differences(x, k)
    rhs = LaurentPolynomial.monomial(e, 2.0)
    p = LaurentPolynomial(kernels.newton_to_monomial(x, _apply_polynomial(x, rhs, kdd)), 0)
    a = f.to_poly()
    for _ in range(corrections):
        r = rhs - bezout_lhs(a, p, star)
        if r.is_zero():
            break
        p = p + LaurentPolynomial(kernels.newton_to_monomial(x, _apply_polynomial(x, r, kdd)), 0)
    return p


ROOT_BACKENDS = ("hermite", "pfd", "ipfd", "update")


def solve_roots(f, i, star, backend="hermite", check_tol=1e-9):
    """Cofactor ``p_i`` (degree ``< n``) from the factored symbol ``f``.

    ``backend`` is one of :data:`ROOT_BACKENDS`.  The result is
    checked against the equation; the ``update`` backend falls back to
    ``ipfd`` when its residual is too large.
    """
    star = parse_star(star)
    n = f.n
    if not 1 <= i <= n:
        raise IndexError(f"i={i} outside 1..{n}")
    f.check_coprime()
    if backend == "hermite":
        p = _solve_hermite(f, i, star)
    elif backend == "pfd":
        p = _solve_pfd(f, i, star)
    elif backend == "ipfd":
        k, _ = incomplete_pfd_cofactor(f)
        p = _second_step(f, k, i, star)
    elif backend == "update":
        k, _ = incremental_cofactor(f)
        p = _second_step(f, k, i, star)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if check_tol is not None:
        a = f.to_poly()
        res = bezout_residual(a, p, i, star)
        scale = max(1.0, float(np.max(np.abs(a.coeffs)))) * max(1.0, float(np.max(np.abs(p.coeffs))))
        if res > check_tol * scale:
            if backend == "update":
                return solve_roots(f, i, star, backend="ipfd", check_tol=check_tol)
            raise ResidualTooLarge(f"root solve residual {res:.3e} for i={i}, star={star}")
    return p
