"""Running subdivision schemes on data and checking what they reproduce.

Data live on the integer lattice with implicit zero extension.  Each run
tracks the *valid region*: indices whose values do not depend on the zero
padding outside the initial window.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ValidationError, ZeroPolynomial
from .laurent import LaurentPolynomial, evaluate, is_interpolatory


@dataclass(frozen=True)
class DataSequence:
    """Values ``values[j]`` at lattice index ``offset + j``; 1D or ``(L, d)``."""

    values: np.ndarray
    offset: int = 0

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim not in (1, 2) or v.shape[0] == 0:
            raise ValidationError("data must be a non-empty 1D or 2D array")
        if not np.all(np.isfinite(v)):
            raise ValidationError("data contain non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "offset", int(self.offset))

    def __len__(self):
        return self.values.shape[0]

    @property
    def indices(self):
        return np.arange(self.offset, self.offset + len(self))

    @property
    def last(self):
        return self.offset + len(self) - 1

    def at(self, idx):
        """Values at lattice indices ``idx`` (zero outside the window)."""
        idx = np.asarray(idx)
        out = np.zeros(idx.shape + self.values.shape[1:])
        j = idx - self.offset
        ok = (j >= 0) & (j < len(self))
        out[ok] = self.values[j[ok]]
        return out


def _real_mask(mask):
    if mask.is_zero():
        raise ZeroPolynomial("empty mask")
    if not mask.is_real():
        raise ValidationError("subdivision needs a real mask")
    return mask.coeffs.real


def refine(mask, data, interpolatory=None):
    """One step ``(S q)_i = sum_j mask_{i - 2j} q_j``.

    For interpolatory masks (detected when ``interpolatory`` is ``None``) the
    even outputs are copies of the inputs rather than sums.
    """
    coeffs = _real_mask(mask)
    if interpolatory is None:
        interpolatory = is_interpolatory(mask, 1e-12)[0]
    q = data.values if data.values.ndim == 2 else data.values[:, None]
    out = kernels.refine_upsampled(np.ascontiguousarray(q), np.ascontiguousarray(coeffs), int(mask.low),
                                   bool(interpolatory))
    out = np.asarray(out)
    if data.values.ndim == 1:
        out = out[:, 0]
    return DataSequence(out, 2 * data.offset + mask.low)


def refine_valid(lo, hi, mask):
    """Valid index range after one step from the valid range ``[lo, hi]``.

    ``(S q)_i`` reads ``q_j`` for ``(i - high)/2 <= j <= (i - low)/2``; all of
    those must be valid.
    """
    return 2 * lo + mask.high, 2 * hi + mask.low


@dataclass
class RefinementRun:
    levels: list = field(default_factory=list)
    valid: list = field(default_factory=list)
    symbols: list = field(default_factory=list)

    @property
    def K(self):
        return len(self.levels) - 1

    def grid(self, k):
        """Parameters ``t = i / 2**k`` of the stored level-``k`` values."""
        return self.levels[k].indices / 2.0 ** k

    def valid_flags(self, k):
        lo, hi = self.valid[k]
        idx = self.levels[k].indices
        return (idx >= lo) & (idx <= hi)

    def interpolant(self, k=None):
        """Piecewise-linear interpolant of level ``k`` (default the last) as a callable."""
        k = self.K if k is None else k
        t = self.grid(k)
        vals = self.levels[k].values

        def Q(x):
            x = np.asarray(x, dtype=float)
            if vals.ndim == 1:
                return np.interp(x, t, vals)
            return np.stack([np.interp(x, t, vals[:, c]) for c in range(vals.shape[1])], axis=-1)

        return Q

    def rows(self, k=None, span=None):
        """``(level, index, t, values..., valid)`` tuples for level ``k``.

        ``span=(t0, t1)`` keeps only points with ``t0 <= t <= t1``.
        """
        k = self.K if k is None else k
        seq = self.levels[k]
        t = self.grid(k)
        flags = self.valid_flags(k)
        vals = seq.values if seq.values.ndim == 2 else seq.values[:, None]
        out = []
        for j, idx in enumerate(seq.indices):
            if span is not None and not (span[0] - 1e-12 <= t[j] <= span[1] + 1e-12):
                continue
            out.append((k, int(idx), float(t[j]), *(float(v) for v in vals[j]), int(flags[j])))
        return out


def run_scheme(symbols, data, K):
    """Apply ``symbols[k]`` at level ``k`` for ``k < K``."""
    if K > len(symbols):
        raise ValidationError(f"{K} levels requested but only {len(symbols)} symbols")
    run = RefinementRun(levels=[data], valid=[(data.offset, data.last)], symbols=list(symbols[:K]))
    for k in range(K):
        m = symbols[k]
        run.levels.append(refine(m, run.levels[-1]))
        run.valid.append(refine_valid(*run.valid[-1], m))
    return run


def check_reproduction_conditions(m, spectrum, k, mode="reproduction", tol=1e-9):
    """Residuals of the zero conditions at ``z = +-exp(-theta / 2**(k+1))``.

    Reproduction mode checks ``m(z_l) = 2``, ``m(-z_l) = 0`` and the vanishing
    of derivatives ``1..tau_l - 1`` at both points; generation mode checks
    only the conditions at ``-z_l``.  Returns a dict of maximal residuals per
    group plus ``passed``; never raises for numerical failures.
    """
    if mode not in ("reproduction", "generation"):
        raise ValidationError(f"unknown mode {mode!r}")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    report = {"k": k, "mode": mode, "value_minus": 0.0, "deriv_minus": 0.0}
    if mode == "reproduction":
        report.update(value_plus=0.0, deriv_plus=0.0)
    for z, tau in spectrum.level_zeros(k):
        report["value_minus"] = max(report["value_minus"], abs(evaluate(m, -z)))
        for r in range(1, tau):
            report["deriv_minus"] = max(report["deriv_minus"], abs(evaluate(m, -z, r)))
        if mode == "reproduction":
            report["value_plus"] = max(report["value_plus"], abs(evaluate(m, z) - 2.0))
            for r in range(1, tau):
                report["deriv_plus"] = max(report["deriv_plus"], abs(evaluate(m, z, r)))
    groups = [v for key, v in report.items() if key.startswith(("value", "deriv"))]
    report["max"] = max(groups)
    report["passed"] = bool(report["max"] <= tol) and all(math.isfinite(g) for g in groups)
    return report


def stepwise_residual(symbols, f, K, window=(-8, 8)):
    """Largest ``|value - f(t)|`` over inserted (odd) points inside the valid region.

    ``f`` is sampled on the integers of ``window`` to form the level-0 data.
    Returns ``(max_residual, per_level)``.
    """
    idx = np.arange(window[0], window[1] + 1)
    vals = np.asarray(f(idx.astype(float)))
    if np.iscomplexobj(vals):
        if np.max(np.abs(vals.imag)) > 1e-12 * max(1.0, np.max(np.abs(vals))):
            raise ValidationError("basis function is not real on the grid; use real mode")
        vals = vals.real
    run = run_scheme(symbols, DataSequence(vals, window[0]), K)
    per_level = []
    for k in range(1, K + 1):
        seq = run.levels[k]
        lo, hi = run.valid[k]
        ids = seq.indices
        sel = (ids % 2 == 1) & (ids >= lo) & (ids <= hi)
        if not np.any(sel):
            per_level.append(0.0)
            continue
        exact = np.real(f(ids[sel] / 2.0 ** k))
        per_level.append(float(np.max(np.abs(seq.values[sel] - exact))))
    return max(per_level, default=0.0), per_level


def reproduction_residual(program, selections, spectrum, basis_index, K, window=(-8, 8), solver="auto"):
    """Run the conversion and the interpolatory scheme on samples of one basis function.

    The basis is taken in real mode (cos/sin for conjugate pairs).  Returns the
    largest stepwise residual over levels ``< K``.
    """
    from .appint import run_appint
    from .spectra import basis_functions

    basis = basis_functions(spectrum, real=spectrum.is_conjugate_closed())
    if not 0 <= basis_index < len(basis):
        raise ValidationError(f"basis index {basis_index} outside 0..{len(basis) - 1}")
    seq = run_appint(program, selections, K, solver=solver)
    res, _ = stepwise_residual(seq.symbols, basis[basis_index][1], K, window)
    return res


def write_csv(path, rows, dim):
    """CSV with header ``level,index,t,x[,y],valid``; floats in shortest round-trip form."""
    header = ["level", "index", "t", "x"] + (["y"] if dim == 2 else []) + ["valid"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(x) if isinstance(x, float) else x for x in row])


def read_csv(path):
    """Rows of a refinement CSV as a dict of column arrays."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"t", "x"} <= set(reader.fieldnames):
            raise ValidationError(f"{path}: expected columns t and x")
        cols = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in reader.fieldnames:
                cols[name].append(float(row[name]))
    return {k: np.array(v) for k, v in cols.items()}
