"""Level-by-level conversion of approximating symbols into interpolatory ones.

For each level ``k`` the driver shift-normalizes the approximating symbol,
checks that it is coprime with its reflection, solves the Bezout-like
equation for the selected ``(i, star)`` and forms
``m(z) = a(z) p(z) / z**(2i - l)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bezout_matrix as bm
from . import bezout_roots as br
from .errors import (BackendMismatch, CoprimalityFailure, ResidualTooLarge,
                     SelectionOutOfRange, ValidationError)
from .laurent import (COPRIME_THRESHOLD, LaurentPolynomial, coprime_margin,
                      is_interpolatory, max_coeff_diff, shift_normalize)

SOLVERS = ("matrix", "roots", "both", "auto")
CROSS_TOL = 1e-9


@dataclass(frozen=True)
class InterpolatorySelection:
    i: int
    star: str = "-"

    def __post_init__(self):
        object.__setattr__(self, "star", bm.parse_star(self.star))
        if int(self.i) < 1:
            raise ValidationError(f"selection index must be positive, got {self.i}")
        object.__setattr__(self, "i", int(self.i))

    @property
    def exponent(self):
        return bm.target_exponent(self.i, self.star)

    def to_json(self):
        return {"i": self.i, "star": self.star}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["i"]), obj.get("star", "-"))


def centered_selection(n):
    """``i = ceil(n/2)`` and the sign whose target exponent is ``n - 1``.

    For even ``n`` this is ``(n/2, -)``, the smallest-support symmetric choice
    for symmetric symbols; for odd ``n`` it is ``((n+1)/2, +)``.
    """
    i = math.ceil(n / 2)
    return InterpolatorySelection(i, "-" if n % 2 == 0 else "+")


def construct_interpolatory(a_hat, p, i, star="-", tol=1e-9):
    """``a_hat(z) p(z) z**-(2i - l)`` after checking ``p`` solves the equation.

    The residual bound is ``tol`` times ``max(1, |a_hat|_inf |p|_inf)``.
    """
    res = bm.bezout_residual(a_hat, p, i, star)
    scale = max(1.0, float(np.max(np.abs(a_hat.coeffs))) * float(np.max(np.abs(p.coeffs)))) if not p.is_zero() else 1.0
    if res > tol * scale:
        raise ResidualTooLarge(f"p misses the equation for (i={i}, star={star}) by {res:.3e}")
    return (a_hat * p).shift(-bm.target_exponent(i, star))


@dataclass
class LevelRecord:
    k: int
    a_hat: LaurentPolynomial
    kappa: int
    selection: InterpolatorySelection
    p: LaurentPolynomial
    m: LaurentPolynomial
    solver: str
    residual: float
    margin: float
    interp_residual: float
    backend_gap: Optional[float] = None
    tension: Optional[float] = None

    def to_json(self):
        out = {
            "k": self.k,
            "m": self.m.to_json(),
            "residual": self.residual,
            "margin": self.margin,
            "selection": self.selection.to_json(),
            "interp_residual": self.interp_residual,
            "a_hat": self.a_hat.to_json(),
            "kappa": self.kappa,
            "p": self.p.to_json(),
            "solver": self.solver,
        }
        if self.backend_gap is not None:
            out["backend_gap"] = self.backend_gap
        if self.tension is not None:
            out["tension"] = self.tension
        return out


@dataclass
class InterpolatorySequence:
    records: list = field(default_factory=list)

    @property
    def symbols(self):
        return [r.m for r in self.records]

    def __len__(self):
        return len(self.records)

    def to_json(self):
        return [r.to_json() for r in self.records]


def _as_real(poly):
    return poly.realify() if poly.is_real() else poly


def appint_level(symbol, selection=None, solver="matrix", factored=None, k=0,
                 root_backend="hermite", tol=1e-9, margin_threshold=COPRIME_THRESHOLD):
    """Convert one level's approximating symbol; returns a :class:`LevelRecord`.

    ``factored`` is the root form of the shift-normalized symbol and is needed
    for ``solver`` in (``roots``, ``both``).
    """
    a_hat, kappa = shift_normalize(symbol)
    n = a_hat.high
    margin = coprime_margin(a_hat) if n >= 1 else 0.0
    if n < 1 or margin < margin_threshold:
        raise CoprimalityFailure(k, margin)
    sel = selection or centered_selection(n)
    if sel.i > n:
        raise SelectionOutOfRange(k, sel.i, n)

    if solver in ("roots", "both") and factored is None:
        if solver == "roots":
            raise ValidationError(f"level {k}: root solver needs a factored symbol")
        solver = "matrix"
    if factored is not None:
        gap = max_coeff_diff(factored.to_poly(), a_hat)
        if gap > 1e-8 * max(1.0, float(np.max(np.abs(a_hat.coeffs)))):
            raise ValidationError(f"level {k}: factored form disagrees with symbol by {gap:.2e}")

    p_mat = p_root = None
    if solver in ("matrix", "both"):
        sys = bm.reduce_half(bm.build_resultant(a_hat, sel.star))
        p_mat = bm.solve_matrix(sys, sel.i, sel.star, threshold=margin_threshold)
    if solver in ("roots", "both"):
        p_root = br.solve_roots(factored, sel.i, sel.star, backend=root_backend)
    gap = None
    if p_mat is not None and p_root is not None:
        gap = max_coeff_diff(p_mat, p_root)
        if gap > CROSS_TOL:
            raise BackendMismatch(f"level {k}: matrix and root solutions differ by {gap:.3e}")
    p = p_root if p_root is not None else p_mat
    p = _as_real(p) if a_hat.is_real() else p
    m = _as_real(construct_interpolatory(a_hat, p, sel.i, sel.star, tol=tol))
    return LevelRecord(
        k=k, a_hat=a_hat, kappa=kappa, selection=sel, p=p, m=m,
        solver=solver if solver != "both" else f"both/{root_backend}",
        residual=bm.bezout_residual(a_hat, p, sel.i, sel.star),
        margin=margin,
        interp_residual=is_interpolatory(m, 1.0)[1],
        backend_gap=gap,
    )


def _selection_at(selections, k):
    if selections is None or isinstance(selections, InterpolatorySelection):
        return selections
    if k >= len(selections):
        if len(selections) == 1:
            return selections[0]
        raise ValidationError(f"no selection for level {k}")
    return selections[k]


def run_appint(program, selections=None, K=1, solver="auto", root_backend="hermite",
               tol=1e-9, margin_threshold=COPRIME_THRESHOLD):
    """Run the conversion for levels ``0..K-1`` of ``program``.

    ``selections`` may be ``None`` (centered choice per level), a single
    :class:`InterpolatorySelection` (broadcast) or a per-level list.
    ``solver="auto"`` uses the root path when the program carries factored
    symbols and the matrix path otherwise; ``both`` cross-checks the two.
    On a coprimality failure the exception carries the levels completed so far
    in ``partial``.
    """
    if K < 1:
        raise ValidationError("need at least one level")
    if solver not in SOLVERS:
        raise ValidationError(f"unknown solver {solver!r}")
    if solver == "auto":
        solver = "roots" if program.has_factored() else "matrix"
    seq = InterpolatorySequence()
    for k in range(K):
        symbol = program.symbol(k)
        factored = program.factored(k) if solver in ("roots", "both") else None
        try:
            rec = appint_level(symbol, _selection_at(selections, k), solver, factored, k,
                               root_backend=root_backend, tol=tol, margin_threshold=margin_threshold)
        except CoprimalityFailure as exc:
            exc.partial = seq
            raise
        if program.v_init is not None and program.family == "five_term":
            rec.tension = program.tension(k)
        seq.records.append(rec)
    return seq


def replay(provenance, tol=1e-9):
    """Rebuild every level of a serialized sequence from its recorded ``a_hat`` and ``p``.

    Returns the largest coefficient gap between the recorded and recomputed
    interpolatory symbols.
    """
    worst = 0.0
    for rec in provenance:
        a_hat = LaurentPolynomial.from_json(rec["a_hat"])
        p = LaurentPolynomial.from_json(rec["p"])
        sel = InterpolatorySelection.from_json(rec["selection"])
        m = construct_interpolatory(a_hat, p, sel.i, sel.star, tol=tol)
        worst = max(worst, max_coeff_diff(m, LaurentPolynomial.from_json(rec["m"])))
    return worst
