"""Shared generators for the test suite."""
import numpy as np

from interpsub.bezout_roots import FactoredSymbol, merge_roots
from interpsub.laurent import LaurentPolynomial, coprime_margin

MIN_MARGIN = 1e-4
MIN_REFLECTED_GAP = 0.5


def _draw_roots(rng, n):
    roots = []
    while len(roots) < n:
        r = rng.uniform(0.5, 2.0)
        phi = rng.uniform(0.0, np.pi)
        if n - len(roots) >= 2 and rng.random() < 0.5:
            z = r * np.exp(1j * phi)
            roots += [z, z.conjugate()]
        else:
            roots.append(r * rng.choice([-1.0, 1.0]))
    return np.array(roots)


def random_coprime_factored(rng, n=None, degrees=(2, 10)):
    """Random real symbol with real and conjugate-pair roots, unit max coefficient.

    Rejects draws whose roots come within 0.5 of a reflected root or whose
    coprime margin is below 1e-4.
    """
    if n is None:
        n = int(rng.integers(degrees[0], degrees[1] + 1))
    while True:
        R = _draw_roots(rng, n)
        if np.min(np.abs(R[:, None] + R[None, :])) < MIN_REFLECTED_GAP:
            continue
        roots = merge_roots([(z, 1) for z in R])
        poly = FactoredSymbol(1.0, roots).to_poly()
        lead = 1.0 / float(np.max(np.abs(poly.coeffs)))
        f = FactoredSymbol(complex(lead), roots)
        if coprime_margin(f.to_poly()) >= MIN_MARGIN:
            return f


def random_symmetric(rng, n):
    """Random real palindromic polynomial of degree ``n`` that is coprime with its reflection."""
    while True:
        half = rng.uniform(0.2, 1.0, size=n // 2 + 1)
        c = np.concatenate([half, half[: (n + 1) // 2][::-1]])
        p = LaurentPolynomial(c, 0)
        if p.high == n and coprime_margin(p) >= MIN_MARGIN:
            return p


def random_laurent(rng, max_len=13, complex_=True):
    size = int(rng.integers(1, max_len + 1))
    c = rng.normal(size=size) + (1j * rng.normal(size=size) if complex_ else 0)
    c[0] += np.sign(c[0].real or 1.0)
    c[-1] += np.sign(c[-1].real or 1.0)
    return LaurentPolynomial(c, int(rng.integers(-4, 5)))


# criterion number -> summary line, filled by the acceptance tests
ACCEPTANCE = {}
