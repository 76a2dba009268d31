import json
import math

import numpy as np
import pytest

from interpsub.appint import (InterpolatorySelection, appint_level, centered_selection,
                              construct_interpolatory, replay, run_appint)
from interpsub.bezout_matrix import solve
from interpsub.errors import (CoprimalityFailure, ResidualTooLarge, SelectionOutOfRange,
                              ValidationError)
from interpsub.laurent import LaurentPolynomial as L, evaluate, is_interpolatory, max_coeff_diff
from interpsub.spectra import SpectrumSpec, SymbolProgram, cubic_symbol

from helpers import random_symmetric

DD4 = L(np.array([-1, 0, 9, 16, 9, 0, -1]) / 16, -3)
CUBIC_EXP = SpectrumSpec(((0, 2), (1, 1), (-1, 1)))


class TestSelection:
    def test_validation(self):
        with pytest.raises(ValidationError):
            InterpolatorySelection(0)
        with pytest.raises(ValueError):
            InterpolatorySelection(1, "x")

    def test_exponent(self):
        assert InterpolatorySelection(2, "-").exponent == 3
        assert InterpolatorySelection(2, "+").exponent == 2

    def test_json(self):
        s = InterpolatorySelection(3, "+")
        assert InterpolatorySelection.from_json(json.loads(json.dumps(s.to_json()))) == s

    @pytest.mark.parametrize("n", range(1, 12))
    def test_centered_exponent(self, n):
        assert centered_selection(n).exponent == n - 1


class TestConstruct:
    def test_linear_scheme(self):
        m = construct_interpolatory(L([0.5, 1, 0.5]), L([1.0]), 1)
        assert m.low == -1 and m.allclose(L([0.5, 1, 0.5], -1))

    def test_dd4(self):
        p = L(np.array([-1, 4, -1]) / 2)
        m = construct_interpolatory(cubic_symbol(1.0), p, 2)
        assert m.low == -3 and max_coeff_diff(m, DD4) <= 1e-15

    @pytest.mark.parametrize("v", [0.4, 1.7])
    def test_cubic_exponential(self, v):
        a = cubic_symbol(v)
        p = L(np.array([-1, 2 * (v + 1), -1]) / (2 * v))
        m = construct_interpolatory(a, p, 2)
        assert max_coeff_diff(m, (a * p).shift(-3)) == 0
        assert is_interpolatory(m, 1e-12)[0]

    def test_wrong_cofactor(self):
        with pytest.raises(ResidualTooLarge):
            construct_interpolatory(L([0.5, 1, 0.5]), L([1.0, 0.1]), 1)

    def test_plus_sign_shift(self):
        a = cubic_symbol(0.9)
        p = solve(a, 2, "+")
        m = construct_interpolatory(a, p, 2, "+")
        assert is_interpolatory(m, 1e-12)[0]


class TestRunAppint:
    def test_stationary_dd4(self):
        prog = SymbolProgram("five_term", v_init=1.0, alpha=0, beta=0)
        seq = run_appint(prog, InterpolatorySelection(2, "-"), K=3, solver="both")
        assert len(seq) == 3
        for m in seq.symbols:
            assert max_coeff_diff(m, DD4) <= 1e-12

    def test_cubic_exponential_from_zero(self):
        prog = SymbolProgram("five_term", v_init=0.0, alpha=0, beta=0)
        seq = run_appint(prog, InterpolatorySelection(2, "-"), K=4, solver="both")
        assert len(seq) == 4
        for rec in seq.records:
            assert is_interpolatory(rec.m, 1e-9)[0]
            assert rec.backend_gap <= 1e-9
        assert [r.tension for r in seq.records] == pytest.approx([math.sqrt(0.5), *[
            math.sqrt((1 + t) / 2) for t in [r.tension for r in seq.records][:-1]]])

    @pytest.mark.parametrize("solver", ["matrix", "roots", "both", "auto"])
    def test_solvers_agree_on_exp_bspline(self, solver):
        prog = SymbolProgram("exp_bspline", spectrum=CUBIC_EXP)
        seq = run_appint(prog, K=4, solver=solver)
        ref = run_appint(prog, K=4, solver="matrix")
        for a, b in zip(seq.symbols, ref.symbols):
            assert max_coeff_diff(a, b) <= 1e-9

    def test_non_coprime_explicit(self):
        prog = SymbolProgram("explicit", symbols=[L([1, 0, -1])])
        with pytest.raises(CoprimalityFailure) as exc:
            run_appint(prog, K=1)
        assert exc.value.level == 0 and len(exc.value.partial) == 0

    def test_partial_output_kept(self):
        prog = SymbolProgram("explicit", symbols=[cubic_symbol(1.0), L([1, 0, -1])])
        with pytest.raises(CoprimalityFailure) as exc:
            run_appint(prog, K=2)
        assert exc.value.level == 1 and len(exc.value.partial) == 1

    def test_selection_out_of_range(self):
        prog = SymbolProgram("explicit", symbols=[L([0.5, 1, 0.5])])
        with pytest.raises(SelectionOutOfRange):
            run_appint(prog, InterpolatorySelection(3), K=1)

    def test_per_level_selections(self):
        prog = SymbolProgram("exp_bspline", spectrum=CUBIC_EXP)
        sels = [InterpolatorySelection(2, "-"), InterpolatorySelection(1, "-"), InterpolatorySelection(3, "+")]
        seq = run_appint(prog, sels, K=3, solver="both")
        assert [r.selection for r in seq.records] == sels
        with pytest.raises(ValidationError):
            run_appint(prog, sels[:2], K=3)

    def test_bad_arguments(self):
        prog = SymbolProgram("exp_bspline", spectrum=CUBIC_EXP)
        with pytest.raises(ValidationError):
            run_appint(prog, K=0)
        with pytest.raises(ValidationError):
            run_appint(prog, solver="fast")

    def test_roots_need_factored(self):
        with pytest.raises(ValidationError):
            appint_level(cubic_symbol(1.0), solver="roots")

    def test_factored_mismatch(self):
        prog = SymbolProgram("exp_bspline", spectrum=CUBIC_EXP)
        with pytest.raises(ValidationError):
            appint_level(cubic_symbol(3.0), solver="roots", factored=prog.factored(0))


class TestProperties:
    @pytest.mark.parametrize("case", [1, 2, 3, 4, 5])
    def test_values_at_plus_minus_one(self, case):
        seq = run_appint(SymbolProgram("five_term", v_init=0.8, case=case), K=5, solver="both")
        for m in seq.symbols:
            assert abs(evaluate(m, 1.0) - 2) <= 1e-9
            assert abs(evaluate(m, -1.0)) <= 1e-9
            assert is_interpolatory(m, 1e-9)[0]

    def test_symmetric_centered(self):
        rng = np.random.default_rng(17)
        for n in (2, 4, 6, 8, 10):
            a = random_symmetric(rng, n)
            m = appint_level(a).m
            c = m.dense(m.low, m.high)
            assert m.low == -m.high
            assert np.abs(c - c[::-1]).max() <= 1e-10

    def test_support_bookkeeping(self):
        rng = np.random.default_rng(1)
        for n in range(2, 9):
            a = random_symmetric(rng, n)
            for i in range(1, n + 1):
                for star in "+-":
                    rec = appint_level(a, InterpolatorySelection(i, star))
                    e = rec.selection.exponent
                    assert rec.m.low >= -e
                    assert rec.m.high <= n + (n - 1) - e

    def test_record_json_shape(self):
        seq = run_appint(SymbolProgram("exp_bspline", spectrum=CUBIC_EXP), K=2, solver="both")
        out = json.loads(json.dumps(seq.to_json()))
        assert [r["k"] for r in out] == [0, 1]
        assert set(out[0]) >= {"k", "m", "residual", "margin", "selection"}
        assert set(out[0]["m"]) == {"low", "coeffs"}
        assert out[0]["selection"] == {"i": 2, "star": "-"}

    def test_replay(self):
        seq = run_appint(SymbolProgram("five_term", v_init=0.3, case=3), K=4, solver="both")
        prov = json.loads(json.dumps(seq.to_json()))
        assert replay(prov) <= 1e-15
        prov[2]["m"]["coeffs"][0][0] += 1e-6
        assert replay(prov) >= 1e-7
