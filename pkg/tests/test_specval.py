"""Floating-point special values: Hurwitz zeta numerics, cube quadratures,
closed forms and their cross-oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest

from zetaforge import specval
from zetaforge.exact import hurwitz_zeta_nonpos, pochhammer
from zetaforge.specval import (
    APPENDIX_AB_EXACT,
    NchoParams,
    PoleAtOne,
    SeriesRegimeViolated,
    TableExhausted,
    UnsupportedIndexPair,
    appendixB_integral,
    hurwitz_zeta_num,
    hyp2f1_quarter,
    r42_order_of_contact,
    r42_series,
    r_k1_series,
    r_kj_quadrature,
    zetaQ2_closed,
    zetaQ_special,
)

F = Fraction
PI = math.pi


class TestHurwitzNumeric:
    def test_classic_values(self):
        assert abs(hurwitz_zeta_num(2, 1.0) - PI**2 / 6) < 1e-12
        assert abs(hurwitz_zeta_num(4, 1.0) - PI**4 / 90) < 1e-12
        assert abs(hurwitz_zeta_num(2, 0.5) - PI**2 / 2) < 1e-12

    def test_shifted_value(self):
        z3 = hurwitz_zeta_num(3, 1.0)
        assert abs(hurwitz_zeta_num(3, 3.0) - (z3 - 1 - 0.125)) < 1e-12

    def test_pole(self):
        with pytest.raises(PoleAtOne):
            hurwitz_zeta_num(1, 2.0)

    def test_ladder_identity_randomized(self):
        rng = np.random.default_rng(7)
        for _ in range(12):
            s = float(rng.uniform(1.3, 9.0))
            tau = float(rng.uniform(0.26, 4.0))
            lhs = hurwitz_zeta_num(s, tau)
            rhs = hurwitz_zeta_num(s, tau + 1) + tau**-s
            assert abs(lhs - rhs) < 1e-12

    @pytest.mark.parametrize("s", [2, 3, 4, 6])
    def test_half_argument_doubling(self, s):
        lhs = hurwitz_zeta_num(s, 0.5)
        rhs = (2**s - 1) * hurwitz_zeta_num(s, 1.0)
        assert abs(lhs - rhs) < 1e-12

    def test_continuation_matches_exact_nonpositive(self):
        for k in range(11):
            for tau in (F(1, 2), F(1, 3), F(7, 5)):
                num = hurwitz_zeta_num(-k, float(tau))
                assert abs(num - float(hurwitz_zeta_nonpos(k, tau))) < 1e-12

    def test_doubling_M_stability(self):
        for s, tau in ((2.5, 0.7), (6.0, 0.3), (3.0, 2.2)):
            a = hurwitz_zeta_num(s, tau, terms=25)
            b = hurwitz_zeta_num(s, tau, terms=50)
            assert abs(a - b) < 1e-12

    def test_complex_argument(self):
        v = hurwitz_zeta_num(2 + 1j, 1.0)
        w = hurwitz_zeta_num(2 + 1j, 2.0)
        assert abs(v - (w + 1.0)) < 1e-12  # ladder at tau = 1


class TestHyp2F1Quarter:
    def exact_series(self, x, N=400):
        xf = F(x)
        tot = F(0)
        for n in range(N):
            tot += (
                pochhammer(F(1, 4), n)
                * pochhammer(F(3, 4), n)
                / F(math.factorial(n)) ** 2
                * xf**n
            )
        return float(tot)

    def test_against_direct_series_inside_disc(self):
        for x in (-0.1, -0.25, -0.5, -0.9):
            assert abs(hyp2f1_quarter(x) - self.exact_series(x)) < 1e-12

    def test_at_zero(self):
        assert hyp2f1_quarter(0.0) == 1.0

    def test_outside_unit_disc_converges(self):
        # the Pfaff-transformed series still converges for x <= -1
        v = hyp2f1_quarter(-2.0)
        assert 0.5 < v < 1.0

    def test_rejects_positive(self):
        with pytest.raises(SeriesRegimeViolated):
            hyp2f1_quarter(0.5)


class TestRk1Series:
    def test_kappa_zero_reduces_to_half_zeta(self):
        v, last = r_k1_series(2, 0.0, 5)
        assert abs(v - PI**2 / 2) < 1e-12
        v3, _ = r_k1_series(3, 0.0, 5)
        assert abs(v3 - 2 * hurwitz_zeta_num(3, 0.5)) < 1e-12

    def test_closed_form_cross_oracle(self):
        # R_{2,1}(kappa) = (pi^2/2) F(-kappa^2)^2 with F = 2F1(1/4,3/4;1;.)
        for kappa in (0.3, 0.5, 0.7):
            v, last = r_k1_series(2, kappa, 90)
            f = hyp2f1_quarter(-(kappa**2))
            assert abs(v - PI**2 / 2 * f * f) < max(1e-8, 10 * last), kappa

    def test_regime_guard(self):
        with pytest.raises(SeriesRegimeViolated):
            r_k1_series(2, 1.0, 10)


class TestRkjQuadrature:
    def test_r21_at_zero(self):
        r = r_kj_quadrature(2, 1, 0.0, budget=400_000, seed=11)
        assert abs(r.value - PI**2 / 2) <= 3 * r.std_error

    def test_r42_at_zero(self):
        r = r_kj_quadrature(4, 2, 0.0, budget=400_000, seed=11)
        assert abs(r.value - PI**4 / 6) <= 3 * r.std_error

    def test_r21_cross_oracle_at_half(self):
        q = r_kj_quadrature(2, 1, 0.5, budget=400_000, seed=12)
        s, _ = r_k1_series(2, 0.5, 90)
        assert abs(q.value - s) <= 3 * q.std_error

    def test_r31_at_zero(self):
        # 3 * 8 * sum 1/(2m+1)^3 scaled: at kappa=0 integrand is
        # 24/(1 - u1^2 u2^2 u3^2): value 24 * sum 1/(2m+1)^3 / 8... direct:
        # integral of (u1 u2 u3)^{2m} = 1/(2m+1)^3
        target = 24 * sum(1.0 / (2 * m + 1) ** 3 for m in range(200000))
        r = r_kj_quadrature(3, 1, 0.0, budget=400_000, seed=13)
        assert abs(r.value - target) <= 3 * r.std_error

    def test_monotone_decreasing_in_kappa(self):
        vals = []
        for kappa in (0.0, 0.2, 0.4, 0.6, 0.8):
            r = r_kj_quadrature(2, 1, kappa, budget=200_000, seed=14)
            vals.append((r.value, r.std_error))
        for (a, ea), (b, eb) in zip(vals, vals[1:]):
            assert b < a + 3 * (ea + eb)

    def test_tensor_gauss_agrees_with_mc(self):
        g = r_kj_quadrature(2, 1, 0.5, method="TENSOR_GAUSS", budget=10_000)
        m = r_kj_quadrature(2, 1, 0.5, budget=400_000, seed=15)
        assert g.std_error == 0.0
        assert abs(g.value - m.value) < max(4 * m.std_error, 0.02)

    def test_unsupported_pair(self):
        with pytest.raises(UnsupportedIndexPair):
            r_kj_quadrature(3, 2, 0.1)

    def test_determinism(self):
        a = r_kj_quadrature(2, 1, 0.3, budget=50_000, seed=42)
        b = r_kj_quadrature(2, 1, 0.3, budget=50_000, seed=42)
        assert a.value == b.value and a.std_error == b.std_error


class TestZetaQ:
    def test_equal_parameters_reduce_to_riemann(self):
        p = NchoParams(math.sqrt(2), math.sqrt(2))
        res = zetaQ_special(2, p, budget=1000)
        assert abs(res.value - PI**2) < 1e-12  # r = 0: no quadrature needed
        assert abs(zetaQ2_closed(p) - PI**2) < 1e-12

    def test_general_equal_parameters(self):
        for a in (1.3, 2.0, 3.5):
            p = NchoParams(a, a)
            assert abs(zetaQ2_closed(p) - PI**2 / (a * a - 1)) < 1e-10

    def test_closed_vs_assembled(self):
        for (a, b) in ((2.0, 1.0), (2.5, 0.6)):
            p = NchoParams(a, b)
            closed = zetaQ2_closed(p)
            asm = zetaQ_special(2, p, budget=600_000, seed=3)
            assert abs(asm.value - closed) <= max(3 * asm.std_error, 5e-3 * closed)

    def test_swap_symmetry(self):
        p = NchoParams(2.0, 1.0)
        assert zetaQ2_closed(p) == zetaQ2_closed(p.swap())
        a = zetaQ_special(2, p, budget=200_000, seed=4)
        b = zetaQ_special(2, p.swap(), budget=200_000, seed=4)
        assert abs(a.value - b.value) <= 3 * (a.std_error + b.std_error)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            NchoParams(1.0, 0.5)
        with pytest.raises(ValueError):
            NchoParams(-1.0, 2.0)
        assert abs(NchoParams(2.0, 1.0).kappa - 1.0) < 1e-15

    def test_k3_and_k4_assemble(self):
        p = NchoParams(2.0, 1.0)
        r3 = zetaQ_special(3, p, budget=150_000, seed=5)
        r4 = zetaQ_special(4, p, budget=150_000, seed=5)
        assert r3.value > 0 and r4.value > 0
        with pytest.raises(UnsupportedIndexPair):
            zetaQ_special(5, p)


class TestAppendixAB:
    @pytest.mark.parametrize(
        "which,n,k",
        [("A", 0, 0), ("A", 1, 0), ("A", 1, 1), ("B", 0, 0), ("B", 1, 0), ("B", 1, 1)],
    )
    def test_exact_table(self, which, n, k):
        res = appendixB_integral(which, n, k, budget=400_000, seed=21)
        exact = APPENDIX_AB_EXACT[(which, n, k)]
        assert abs(res.value - exact) <= 3 * res.std_error, (which, n, k)

    def test_a_from_b_binomial_relation(self):
        # A_{1,0} = B_{1,0} + B_{1,1}, exactly in the table
        assert (
            abs(
                APPENDIX_AB_EXACT[("A", 1, 0)]
                - APPENDIX_AB_EXACT[("B", 1, 0)]
                - APPENDIX_AB_EXACT[("B", 1, 1)]
            )
            < 1e-15
        )

    def test_r42_series_values(self):
        assert abs(r42_series(0.0) - PI**4 / 6) < 1e-12
        t = 0.1
        expect = 16 * (
            APPENDIX_AB_EXACT[("A", 0, 0)]
            - 0.5 * (APPENDIX_AB_EXACT[("A", 1, 0)] * t + APPENDIX_AB_EXACT[("A", 1, 1)] * t * t)
        )
        assert math.isclose(r42_series(t), expect, rel_tol=1e-13)
        with pytest.raises(TableExhausted):
            r42_series(0.1, n_max=2)

    def test_r42_order_of_contact(self):
        res = r42_order_of_contact([0.1, 0.2], budget=1_500_000, seed=6)
        d1, d2 = res[0]["difference"], res[1]["difference"]
        assert abs(d1) > 3 * res[0]["std_error"]
        slope = math.log(abs(d2 / d1)) / math.log(2.0)
        assert 2.5 < slope < 5.5
