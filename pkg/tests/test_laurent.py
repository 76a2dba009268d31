import json

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from interpsub.errors import DegreeZero, ZeroArgument, ZeroPolynomial
from interpsub.laurent import (LaurentPolynomial as L, coprime_margin, evaluate, is_interpolatory,
                               max_coeff_diff, multiply, resultant_matrices, shift_normalize,
                               sub_symbols)
from interpsub.spectra import exp_bspline_symbol, SpectrumSpec, five_term_factor

from helpers import random_laurent

DD4 = L(np.array([-1, 0, 9, 16, 9, 0, -1]) / 16, -3)
Z = sp.Symbol("z")


def sym_coeffs(expr, low):
    """Ascending coefficients of a Laurent expression in z, starting at ``low``."""
    poly = sp.Poly(sp.expand(expr * Z ** (-low)), Z)
    return np.array([complex(c) for c in reversed(poly.all_coeffs())])


coeffs_st = st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=12)


class TestConstruction:
    def test_trims_both_ends(self):
        p = L([0, 1e-15, 1, 2, 0], -2)
        assert p.low == 0 and p.high == 1

    def test_zero(self):
        assert L.zero().is_zero() and L([0, 0]).is_zero()

    def test_json_round_trip(self):
        p = L([1 + 2j, -3], -1)
        q = L.from_json(json.loads(json.dumps(p.to_json())))
        assert q.low == -1 and max_coeff_diff(p, q) == 0

    def test_realify_rejects_complex(self):
        with pytest.raises(ValueError):
            L([1, 1e-6j]).realify()
        assert L([1, 1e-14j]).realify().coeffs.imag.max() == 0


class TestMultiply:
    def test_difference_of_squares(self):
        assert multiply(L([1, 1]), L([1, -1])).allclose(L([1, 0, -1]))

    def test_repeated_factor(self):
        out = multiply(L([1, 2, 1]), L([1, 2, 1]))
        assert out.allclose(L([1, 4, 6, 4, 1]))

    def test_hand_convolution(self):
        expected = sym_coeffs((1 + Z) ** 2 / 2 * (-1 + 2 * Z), 0)
        out = L([0.5, 1, 0.5]) * L([-1, 2])
        assert np.allclose(out.dense(0, 3), expected)
        assert np.allclose(out.dense(0, 3), [-0.5, 0, 1.5, 1])

    def test_lows_add(self):
        assert (L([1], -3) * L([1, 1], 2)).low == -1

    def test_commutative_associative(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            p, q, r = (random_laurent(rng) for _ in range(3))
            assert max_coeff_diff(p * q, q * p) <= 1e-13 * 100
            scale = np.abs(((p * q) * r).coeffs).max()
            assert max_coeff_diff((p * q) * r, p * (q * r)) <= 1e-13 * scale

    @given(coeffs_st, coeffs_st, st.floats(0.3, 2.0), st.floats(0, 6.28))
    def test_evaluation_is_multiplicative(self, a, b, rad, ang):
        p, q = L(a, -2), L(b, 1)
        if p.is_zero() or q.is_zero():
            return
        z = rad * np.exp(1j * ang)
        lhs = evaluate(p * q, z)
        rhs = evaluate(p, z) * evaluate(q, z)
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs), np.abs(p.coeffs).sum() * np.abs(q.coeffs).sum())


class TestEvaluate:
    def test_exp_bspline_at_one(self):
        s = exp_bspline_symbol(SpectrumSpec(((0, 2), (1, 1), (-1, 1))), 2)
        assert abs(evaluate(s, 1.0) - 2) < 1e-14

    def test_dd4_derivative_at_one(self):
        assert abs(evaluate(DD4, 1.0, 1)) < 1e-15

    def test_zero_polynomial(self):
        assert evaluate(L.zero(), 0.3, 2) == 0

    def test_zero_argument(self):
        with pytest.raises(ZeroArgument):
            evaluate(L([1, 1], -1), 0.0)
        assert evaluate(L([1, 2], 0), 0.0) == 1

    def test_derivative_at_zero_of_polynomial(self):
        assert evaluate(L([1, 2, 3], 0), 0.0, 1) == 2

    @pytest.mark.parametrize("r", [0, 1, 2, 3, 5])
    def test_against_symbolic_derivatives(self, r):
        expr = (-Z ** -3 + 9 * Z ** -1 + 16 + 9 * Z - Z ** 3) / 16 + 2 * Z ** -2
        p = DD4 + L([2], -2)
        for z in (0.7, -1.3, 0.4 + 0.9j):
            exact = complex(sp.diff(expr, Z, r).subs(Z, sp.nsimplify(z) if isinstance(z, float) else z))
            assert abs(evaluate(p, z, r) - exact) <= 1e-11 * max(1.0, abs(exact))

    def test_array_input(self):
        zs = np.array([0.5, 1.0, 2.0])
        assert np.allclose(evaluate(DD4, zs), [evaluate(DD4, z) for z in zs])


class TestSubSymbols:
    def test_one_plus_z(self):
        e, o = sub_symbols(L([1, 1]))
        assert e.allclose(L([1])) and o.allclose(L([1]))

    def test_dd4_even_part(self):
        e, _ = sub_symbols(DD4)
        assert e.allclose(L([1]), atol=0)

    @given(coeffs_st, st.integers(-5, 5))
    def test_recombination(self, c, low):
        p = L(c, low)
        if p.is_zero():
            return
        e, o = sub_symbols(p)
        rng = np.random.default_rng(len(c))
        for z in np.exp(1j * rng.uniform(0, 6.28, 10)) * rng.uniform(0.5, 2, 10):
            lhs = evaluate(e, z * z) + z * evaluate(o, z * z)
            assert abs(lhs - evaluate(p, z)) <= 1e-10 * max(1, np.abs(p.coeffs).sum() * 4)

    def test_recombination_exact_on_coefficients(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            p = random_laurent(rng)
            e, o = sub_symbols(p)
            rebuilt = L.zero()
            for j, c in enumerate(e.coeffs):
                rebuilt = rebuilt + L([c], 2 * (e.low + j))
            for j, c in enumerate(o.coeffs):
                rebuilt = rebuilt + L([c], 2 * (o.low + j) + 1)
            assert max_coeff_diff(rebuilt, p) == 0


class TestInterpolatory:
    def test_dd4(self):
        assert is_interpolatory(DD4, 1e-12) == (True, 0.0)

    def test_bspline_is_not(self):
        flag, res = is_interpolatory(L(np.array([1, 4, 6, 4, 1]) / 8, 0), 1e-9)
        assert not flag and res > 0.5

    def test_three_term(self):
        assert is_interpolatory(L([-0.5, 0, 1.5, 1], -3), 1e-12) == (True, 0.0)

    def test_tol_must_be_positive(self):
        with pytest.raises(ValueError):
            is_interpolatory(DD4, 0)

    def test_equivalent_to_even_subsymbol(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            odd = rng.normal(size=3)
            m = L([1.0], 0) + L([odd[0]], -1) + L([odd[1]], 1) + L([odd[2]], 3)
            if rng.random() < 0.5:
                m = m + L([1e-3], 2)
            e, _ = sub_symbols(m)
            assert is_interpolatory(m, 1e-9)[0] == (max_coeff_diff(e, L([1.0])) <= 1e-9)


class TestShiftNormalize:
    def test_example(self):
        p, kappa = shift_normalize(L([-0.5, 0, 1.5, 1], -3))
        assert kappa == 3 and p.low == 0 and p.allclose(L([-0.5, 0, 1.5, 1]))

    def test_identity(self):
        p = L([1, 2], 0)
        assert shift_normalize(p)[1] == 0

    def test_zero(self):
        with pytest.raises(ZeroPolynomial):
            shift_normalize(L.zero())


class TestCoprimeMargin:
    def test_disjoint_roots(self):
        assert coprime_margin(L([1, 2, 1])) > 1e-3

    def test_even_polynomial(self):
        assert coprime_margin(L([1, 0, -1])) < 1e-12

    def test_five_term_exclusion(self):
        f = five_term_factor(0.0, 0.5)
        assert f.low == 1 and f.allclose(L([0.5, 0, 0.5], 1))
        assert coprime_margin(shift_normalize(f)[0]) < 1e-12

    def test_scale_invariant(self):
        rng = np.random.default_rng(5)
        p = L(rng.normal(size=6), 0)
        assert abs(coprime_margin(p) - coprime_margin(p * 37.5)) <= 1e-12

    def test_degree_zero(self):
        with pytest.raises(DegreeZero):
            resultant_matrices(L([2.0]))

    def test_requires_normalized(self):
        with pytest.raises(ValueError):
            coprime_margin(L([1, 1], -1))
