"""Level-k approximating symbols built from spectral data.

Covers exponential B-spline symbols, the tension recurrence for the cubic
exponential B-spline parameter ``v``, the five-term affine family built on top
of it (with its five named presets), and samplers for the exponential
polynomial spaces these schemes generate.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .bezout_roots import FactoredSymbol, merge_roots
from .errors import DomainError, PoleAtMinusOne, ValidationError
from .laurent import LaurentPolynomial, shift_normalize

THETA_MERGE_TOL = 1e-12


@dataclass(frozen=True)
class SpectrumSpec:
    """Frequencies ``theta`` with multiplicities ``tau``.

    The space spanned is ``{x**r * exp(theta * x) : r < tau}``.  Entries whose
    frequencies coincide (within 1e-12) are merged by adding multiplicities,
    which is what happens to ``{0, +theta, -theta}`` when ``theta -> 0``.
    """

    entries: tuple = ()

    def __post_init__(self):
        merged: list[list] = []
        for theta, tau in self.entries:
            theta = complex(theta)
            tau = int(tau)
            if tau < 1:
                raise ValidationError(f"multiplicity must be positive, got {tau}")
            for m in merged:
                if abs(m[0] - theta) <= THETA_MERGE_TOL:
                    m[1] += tau
                    break
            else:
                merged.append([theta, tau])
        object.__setattr__(self, "entries", tuple((t, k) for t, k in merged))

    @property
    def T(self):
        return sum(tau for _, tau in self.entries)

    @property
    def thetas(self):
        return [t for t, _ in self.entries]

    def is_conjugate_closed(self, tol=1e-12):
        for theta, tau in self.entries:
            if not any(abs(t - theta.conjugate()) <= tol and k == tau for t, k in self.entries):
                return False
        return True

    def level_zeros(self, k):
        """``(exp(-theta / 2**(k+1)), tau)`` pairs for level ``k``."""
        return [(cmath.exp(-theta / 2.0 ** (k + 1)), tau) for theta, tau in self.entries]

    def to_json(self):
        return {"entries": [{"theta": [t.real, t.imag], "tau": k} for t, k in self.entries]}

    @classmethod
    def from_json(cls, obj):
        entries = []
        for e in obj["entries"]:
            th = e["theta"]
            if isinstance(th, (list, tuple)):
                th = complex(th[0], th[1] if len(th) > 1 else 0.0)
            entries.append((complex(th), int(e["tau"])))
        return cls(tuple(entries))


# --- exponential B-splines ---------------------------------------------------

def _exp_factors(spectrum, k):
    out = []
    for theta, tau in spectrum.entries:
        e = cmath.exp(theta / 2.0 ** (k + 1))
        if abs(e + 1.0) < 1e-14:
            raise PoleAtMinusOne(f"exp(theta/2^{k + 1}) = -1 for theta={theta}", level=k)
        out.append((e, tau))
    return out


def exp_bspline_factored(spectrum, k):
    """Root list of the level-``k`` exponential B-spline symbol."""
    factors = _exp_factors(spectrum, k)
    lead = 2.0 + 0j
    roots = []
    for e, tau in factors:
        lead *= (e / (e + 1.0)) ** tau
        roots.append((-1.0 / e, tau))
    return FactoredSymbol(lead, merge_roots(roots), kappa=0)


def exp_bspline_symbol(spectrum, k):
    """``2 * prod ((e_l z + 1) / (e_l + 1))**tau_l`` with ``e_l = exp(theta_l / 2**(k+1))``."""
    if k < 0:
        raise DomainError("level must be non-negative")
    c = np.array([2.0], dtype=complex)
    for e, tau in _exp_factors(spectrum, k):
        lin = np.array([1.0, e]) / (e + 1.0)
        for _ in range(tau):
            c = np.convolve(c, lin)
    p = LaurentPolynomial(c, 0)
    if spectrum.is_conjugate_closed():
        p = p.realify()
    return p


def tension_update(v):
    """One step ``v -> sqrt((v + 1) / 2)`` of the tension recurrence."""
    if not v > -1:
        raise DomainError(f"tension parameter must exceed -1, got {v}")
    return math.sqrt((v + 1.0) / 2.0)


def tension_chain(v_init, K):
    """``[v(0), ..., v(K-1)]`` from the starting value ``v(-1) = v_init``."""
    out = []
    v = v_init
    for _ in range(K):
        v = tension_update(v)
        out.append(v)
    return out


def theta_from_tension(v, k=-1):
    """Frequency whose level-``k`` tension value is ``v``: ``cosh(theta / 2**(k+1)) == v``.

    Imaginary for ``-1 < v < 1`` (trigonometric case).
    """
    th = cmath.acosh(v) * 2.0 ** (k + 1)
    if abs(th.real) < 1e-300:
        th = complex(0.0, abs(th.imag))
    return th


# --- five-term affine family -------------------------------------------------

def cubic_symbol(v):
    """``(z+1)**2 (z**2 + 2 v z + 1) / (4 (v + 1))``."""
    if not v > -1:
        raise DomainError(f"tension parameter must exceed -1, got {v}")
    c = np.convolve([1.0, 2.0, 1.0], [1.0, 2.0 * v, 1.0]) / (4.0 * (v + 1.0))
    return LaurentPolynomial(c, 0)


def five_term_factor(alpha, beta):
    g = 1.0 - 2.0 * alpha - 2.0 * beta
    return LaurentPolynomial([alpha, beta, g, beta, alpha], 0)


def five_term_symbol(alpha, beta, v):
    """Cubic exponential B-spline times ``alpha + beta z + (1-2alpha-2beta) z^2 + beta z^3 + alpha z^4``.

    No shift is applied: with ``alpha == 0`` the result starts at ``z**1``.
    """
    return cubic_symbol(v) * five_term_factor(alpha, beta)


def _quad_roots(a, b, c):
    """Roots of ``a z^2 + b z + c`` avoiding cancellation."""
    a, b, c = complex(a), complex(b), complex(c)
    d = cmath.sqrt(b * b - 4 * a * c)
    q = -(b + d) / 2 if abs(b + d) >= abs(b - d) else -(b - d) / 2
    if q == 0:
        return [0j, 0j]
    return [q / a, c / q]


def five_term_factored(alpha, beta, v):
    """Factored form of :func:`five_term_symbol`, shift-normalized.

    The quartic factor is split into ``(alpha + c z + alpha z^2)(1 + d z + z^2)``
    and each quadratic solved by the quadratic formula.
    """
    roots = [(-1.0 + 0j, 2)] + [(r, 1) for r in _quad_roots(1.0, 2.0 * v, 1.0)]
    lead = 1.0 / (4.0 * (v + 1.0))
    kappa = 0
    g = 1.0 - 2.0 * alpha - 2.0 * beta
    if alpha != 0:
        disc = cmath.sqrt((4 * alpha + beta) ** 2 - 4 * alpha)
        c1, c2 = (beta + disc) / 2, (beta - disc) / 2
        c = c1 if abs(c1) >= abs(c2) else c2
        if abs(c) < 1e-12:
            quartic = [(r, 1) for r in np.roots([alpha, beta, g, beta, alpha])]
        else:
            d = (1 - 2 * beta - 4 * alpha) / c
            quartic = [(r, 1) for r in _quad_roots(alpha, c, alpha) + _quad_roots(1.0, d, 1.0)]
        roots += quartic
        lead *= alpha
    elif beta != 0:
        roots += [(r, 1) for r in _quad_roots(beta, g, beta)]
        lead *= beta
        kappa = -1
    else:
        lead *= g
        kappa = -2
    return FactoredSymbol(complex(lead), merge_roots(roots), kappa=kappa)


PRESET_MULTIPLICITIES = {
    1: [(0, 4), (1, 1), (-1, 1)],
    2: [(0, 2), (1, 1), (-1, 1), (2, 1), (-2, 1)],
    3: [(0, 2), (1, 2), (-1, 2)],
    4: [(0, 2), (1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1), (-3, 1)],
    5: [(0, 2), (1, 2), (-1, 2), (2, 1), (-2, 1)],
}


def preset_coefficients(case, v):
    """``(alpha, beta)`` of a five-term preset at tension ``v``."""
    if not v > -1:
        raise DomainError(f"tension parameter must exceed -1, got {v}")
    if case == 1:
        return 0.0, 0.25
    if case == 2:
        if v == 0:
            raise DomainError("case 2 undefined at v = 0")
        return 0.0, 1.0 / (4 * v * v)
    if case == 3:
        return 0.0, 1.0 / (2 * (1 + v))
    if case == 4:
        if v == 0 or v == 0.5:
            raise DomainError(f"case 4 undefined at v = {v}")
        w = (2 * v - 1) ** 2
        return 1.0 / (8 * v * v * (v + 1) * w), (4 * v * v - 2 * v - 1) / (4 * v * v * w)
    if case == 5:
        if v == 0:
            raise DomainError("case 5 undefined at v = 0")
        return 1.0 / (8 * v * v * (v + 1)), (2 * v - 1) / (4 * v * v)
    raise ValidationError(f"unknown preset case {case!r}")


def preset_spectrum(case, theta):
    if case not in PRESET_MULTIPLICITIES:
        raise ValidationError(f"unknown preset case {case!r}")
    return SpectrumSpec(tuple((j * theta, tau) for j, tau in PRESET_MULTIPLICITIES[case]))


def preset_five_term(case, v, k=-1):
    """Coefficients and reproduced space of preset ``case`` at tension ``v``.

    ``v`` is read as the level-``k`` tension value, so the returned spectrum
    uses ``theta`` with ``cosh(theta / 2**(k+1)) == v``.  The default
    ``k = -1`` matches passing the starting value of the recurrence.
    """
    alpha, beta = preset_coefficients(case, v)
    return alpha, beta, preset_spectrum(case, theta_from_tension(v, k))


# --- exponential-polynomial spaces ---------------------------------------------

def basis_functions(spectrum, real=False):
    """List of ``(label, f)`` for ``x**r exp(theta x)``, ``r < tau``.

    With ``real=True`` a conjugate pair ``a +- ib`` is replaced by
    ``x**r exp(a x) cos(b x)`` and ``x**r exp(a x) sin(b x)``; the member met
    first gets the cosine.
    """
    out = []
    seen = {}
    for idx, (theta, tau) in enumerate(spectrum.entries):
        kind = "exp"
        if real and abs(theta.imag) > 0:
            partner = next((j for j, (t, _) in enumerate(spectrum.entries)
                            if j != idx and abs(t - theta.conjugate()) <= 1e-12), None)
            if partner is None:
                raise ValidationError(f"no conjugate partner for theta={theta}")
            kind = "sin" if partner in seen else "cos"
            seen[idx] = kind
        for r in range(tau):
            out.append((_label(theta, r, kind), _make_basis(theta, r, kind)))
    return out


def _label(theta, r, kind):
    xr = "" if r == 0 else ("x*" if r == 1 else f"x^{r}*")
    if kind == "exp":
        return f"{xr}exp({theta.real:g}{theta.imag:+g}j x)"
    return f"{xr}exp({theta.real:g} x)*{kind}({abs(theta.imag):g} x)"


def _make_basis(theta, r, kind):
    a, b = theta.real, abs(theta.imag)

    def f(x):
        x = np.asarray(x, dtype=float)
        if kind == "exp":
            val = np.exp(theta * x)
        elif kind == "cos":
            val = np.exp(a * x) * np.cos(b * x)
        else:
            val = np.exp(a * x) * np.sin(b * x)
        return x ** r * val

    return f


def sample_basis(spectrum, grid, real=False):
    """Matrix with one row per basis function sampled on ``grid``."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValidationError("empty grid")
    rows = [f(grid) for _, f in basis_functions(spectrum, real)]
    M = np.array(rows)
    if real or np.all(np.abs(M.imag) == 0):
        M = M.real if not real else np.real_if_close(M)
    return M


# --- symbol programs ---------------------------------------------------------

FAMILIES = ("exp_bspline", "five_term", "explicit")


def _schedule(x, k, name):
    if isinstance(x, (list, tuple)):
        if k >= len(x):
            raise DomainError(f"{name} schedule has no entry for level {k}", level=k)
        return float(x[k])
    return float(x)


@dataclass
class SymbolProgram:
    """Per-level generator of approximating symbols.

    ``exp_bspline`` builds symbols from ``spectrum``; ``five_term`` uses the
    tension chain from ``v_init`` together with either a preset ``case`` or
    ``alpha``/``beta`` (scalars or per-level lists); ``explicit`` replays
    ``symbols``.
    """

    family: str
    spectrum: Optional[SpectrumSpec] = None
    v_init: Optional[float] = None
    case: Optional[int] = None
    alpha: object = None
    beta: object = None
    symbols: Sequence[LaurentPolynomial] = field(default_factory=list)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}")
        if self.family == "exp_bspline" and self.spectrum is None:
            raise ValidationError("exp_bspline needs a spectrum")
        if self.family == "five_term":
            if self.v_init is None:
                raise ValidationError("five_term needs v_init")
            if not self.v_init > -1:
                raise ValidationError(f"v_init must exceed -1, got {self.v_init}")
            if self.case is None and (self.alpha is None or self.beta is None):
                raise ValidationError("five_term needs a preset case or alpha and beta")
            if self.case is not None and self.case not in PRESET_MULTIPLICITIES:
                raise ValidationError(f"unknown preset case {self.case!r}")
        if self.family == "explicit" and not self.symbols:
            raise ValidationError("explicit program needs at least one symbol")
        self._v = []

    def tension(self, k):
        """Tension value ``v(k)``, propagated by the recurrence from ``v_init``."""
        if self.v_init is None:
            raise DomainError("program has no tension chain")
        if len(self._v) <= k:
            self._v = tension_chain(self.v_init, k + 1)
        return self._v[k]

    def coefficients(self, k):
        v = self.tension(k)
        if self.case is not None:
            try:
                return preset_coefficients(self.case, v)
            except DomainError as exc:
                raise DomainError(str(exc), level=k) from None
        return _schedule(self.alpha, k, "alpha"), _schedule(self.beta, k, "beta")

    def symbol(self, k):
        if self.family == "exp_bspline":
            return exp_bspline_symbol(self.spectrum, k)
        if self.family == "five_term":
            alpha, beta = self.coefficients(k)
            return five_term_symbol(alpha, beta, self.tension(k)).realify()
        if k >= len(self.symbols):
            raise DomainError(f"explicit program has no symbol for level {k}", level=k)
        return self.symbols[k]

    def factored(self, k):
        """Root form of the shift-normalized level-``k`` symbol, or ``None``."""
        if self.family == "exp_bspline":
            return exp_bspline_factored(self.spectrum, k)
        if self.family == "five_term":
            alpha, beta = self.coefficients(k)
            return five_term_factored(alpha, beta, self.tension(k))
        return None

    def has_factored(self):
        return self.family != "explicit"

    def generated_spectrum(self):
        """Space the approximating scheme generates, when known."""
        if self.family == "exp_bspline":
            return self.spectrum
        if self.family == "five_term" and self.case is not None:
            return preset_spectrum(self.case, theta_from_tension(self.v_init, -1))
        if self.family == "five_term" and _is_zero_schedule(self.alpha) and _is_zero_schedule(self.beta):
            th = theta_from_tension(self.v_init, -1)
            return SpectrumSpec(((0, 2), (th, 1), (-th, 1)))
        return None

    def normalized(self, k):
        return shift_normalize(self.symbol(k))

    def to_json(self):
        out = {"family": self.family}
        if self.spectrum is not None:
            out["spectrum"] = self.spectrum.to_json()
        if self.v_init is not None:
            out["v_init"] = self.v_init
        if self.case is not None:
            out["case"] = self.case
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.beta is not None:
            out["beta"] = self.beta
        if self.symbols:
            out["symbols"] = [s.to_json() for s in self.symbols]
        return out

    @classmethod
    def from_json(cls, obj):
        spec = obj.get("spectrum")
        return cls(
            family=obj.get("family"),
            spectrum=SpectrumSpec.from_json(spec) if spec is not None else None,
            v_init=obj.get("v_init"),
            case=obj.get("case"),
            alpha=obj.get("alpha"),
            beta=obj.get("beta"),
            symbols=[LaurentPolynomial.from_json(s) for s in obj.get("symbols", [])],
        )


def _is_zero_schedule(x):
    if isinstance(x, (list, tuple)):
        return all(float(a) == 0 for a in x)
    return x is not None and float(x) == 0
