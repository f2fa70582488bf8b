import math
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import coordinate_model
from oracles import alpha_closed_form_p2, brute_h0
from quasihyp.bounds import (alpha, alpha_slope_bound, bound_cor43, bound_cor55, bound_prop41, bound_thm54,
                             g_beta, lambda_d, lambda_limit, morse_lower_bound, theta_sum)
from quasihyp.errors import DegenerateError, MalformedInputError
from quasihyp.filtration import nu_truncated
from quasihyp.geometry import HomogeneousForm, Hypersurface, MonomialModel, linear_form
from quasihyp.lattice import max_theta, product_lattice


def lattice(d):
    form, cone = product_lattice((d,))
    return form, cone, form.basis_class("H")


class TestAlpha:
    def test_four_lines(self, p2_four):
        assert alpha(p2_four, (4,), 0) == Fraction(4, 3)

    @pytest.mark.parametrize("n", range(1, 51))
    def test_closed_form(self, n):
        model = coordinate_model(2, 1)
        assert alpha(model, (2 * n,), 0) == alpha_closed_form_p2(n) == Fraction(2 * n, 3)

    def test_divisor_too_big(self):
        conic = Hypersurface("C", HomogeneousForm.from_dict((2,), {((2, 0, 0),): 1, ((0, 1, 1),): 1}))
        model = MonomialModel((2,), (conic,))
        assert alpha(model, (1,), 0) == 0

    def test_zero_h0(self, p2_four):
        with pytest.raises(DegenerateError):
            alpha(p2_four, (-1,), 0)

    def test_by_enumeration(self):
        model = MonomialModel((1, 1), (linear_form("a", [1, 0], (1, 1), 0),))
        L = (3, 2)
        expected = Fraction(sum(brute_h0((1, 1), (3 - k, 2)) for k in range(1, 4)), brute_h0((1, 1), L))
        assert alpha(model, L, 0) == expected


class TestScalars:
    def test_g(self):
        assert g_beta(1) == Fraction(1, 3)
        assert g_beta(Fraction(1, 2)) == Fraction(1, 24)
        assert g_beta(2) == Fraction(4, 3)
        with pytest.raises(MalformedInputError):
            g_beta(-1)

    @given(st.fractions(min_value=0, max_value=5))
    def test_g_monotone(self, b):
        assert g_beta(b + Fraction(1, 100)) >= g_beta(b)

    def test_lambda(self):
        assert lambda_d(2) == Fraction(7, 12)
        assert lambda_d(3) == Fraction(65, 108)
        with pytest.raises(MalformedInputError):
            lambda_d(0)

    def test_lambda_above_half_and_increasing(self):
        values = [lambda_d(d) for d in range(2, 200)]
        assert all(v > Fraction(1, 2) for v in values)
        assert all(a < b for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("d", [10, 37, 100, 1000])
    def test_lambda_limit(self, d):
        assert abs(float(lambda_d(d)) - lambda_limit()) < 1 / d
        assert lambda_limit() == pytest.approx(1 - math.exp(-1), abs=1e-12)


class TestMorse:
    def test_example(self):
        form, cone, H = lattice(2)
        res = morse_lower_bound(form, 2 * H, H, 10, 5, cone=cone, e_free_big=True)
        assert res.value == Fraction(225, 2)
        assert res.asymptotic and not res.conditional
        assert comb(17, 2) == 136 >= res.value

    def test_k_zero_is_leading_term(self):
        form, _, H = lattice(2)
        assert morse_lower_bound(form, 2 * H, H, 7, 0).value == Fraction(4, 2) * 49

    @pytest.mark.parametrize("d,Lc", [(2, 1), (2, 2), (3, 1), (3, 2)])
    def test_main_term_below_h0(self, d, Lc):
        form, _, H = lattice(d)
        for n in range(1, 26):
            for k in range(1, 2 * n + 1):
                main = morse_lower_bound(form, Lc * H, H, n, k).value
                assert main <= comb(Lc * n - k + d, d) if Lc * n - k >= 0 else main <= 0

    def test_nef_failure_is_recorded(self):
        form, cone, H = lattice(2)
        res = morse_lower_bound(form, H, 2 * H, 3, 1, cone=cone, e_free_big=True)
        assert res.conditional


class TestAlphaSlopeBound:
    def test_examples(self):
        form, cone, H = lattice(2)
        assert bound_cor43(form, 2 * H, H, cone=cone, e_free_big=True).value == Fraction(7, 12)
        assert alpha_slope_bound(form, H, H) == Fraction(7, 24)

    def test_below_exact_slope(self):
        form, _, H = lattice(2)
        bound = alpha_slope_bound(form, 2 * H, H)
        model = coordinate_model(2, 1)
        for n in range(1, 51):
            assert alpha(model, (2 * n,), 0) / n >= bound

    def test_degenerate(self):
        form, cone = product_lattice((1, 1))
        with pytest.raises(DegenerateError):
            alpha_slope_bound(form, form.cls((1, 0)), form.cls((1, 0)))


class TestPairwiseAlphaBound:
    def test_coordinate_lines(self):
        res = bound_prop41(coordinate_model(2), (4,), 2)
        assert res.value == Fraction(4, 3) and not res.conditional

    def test_four_lines(self, p2_four):
        res = bound_prop41(p2_four, (4,), 2)
        assert res.value == Fraction(4, 3) and not res.conditional

    def test_delta_equals_r(self, p2_four):
        res = bound_prop41(p2_four, (4,), 4)
        assert res.value == Fraction(2, 4) * Fraction(4, 3)

    def test_triple_point_fails(self):
        model = MonomialModel((2,), (linear_form("x", [1, 0, 0]), linear_form("y", [0, 1, 0]),
                                     linear_form("u", [1, 1, 0])))
        res = bound_prop41(model, (3,), 2)
        assert [h.name for h in res.failed] == ["every 3-fold intersection empty"]

    def test_below_upper_estimate(self, p2_four):
        for L in (2, 3, 4):
            assert nu_truncated(p2_four, (L,), max_weight=2).value >= bound_prop41(p2_four, (L,), 2).value


class TestThetaNefBound:
    def test_four_lines(self):
        form, cone, H = lattice(2)
        res = bound_thm54(form, 4 * H, [H] * 4, 2, cone=cone, subsets=[(0,), (0, 1)], ample=True)
        assert res.value == Fraction(7, 6)
        assert not res.conditional

    def test_zero_residual(self):
        form, _, H = lattice(2)
        # L - theta D = 0 leaves only the j = 0 term
        assert bound_thm54(form, 2 * H, [H], 2).value == Fraction(2, 3)

    def test_p1(self):
        form, _, H = lattice(1)
        assert bound_thm54(form, 2 * H, [H], 2).value == 1

    def test_theta_sum_by_hand(self):
        form, _, H = lattice(2)
        assert theta_sum(form, 4 * H, H, 2) == 16 + 8 + 4

    def test_conditions_recorded(self):
        form, cone, H = lattice(2)
        res = bound_thm54(form, 4 * H, [H] * 4, 3, cone=cone, subsets=[(0, 1)], ample=True)
        assert [h.name for h in res.failed] == ["L - theta*sum_I D_i nef on meeting subsets"]


class TestLambdaThetaBound:
    def test_values(self):
        assert bound_cor55(2, 2).value == Fraction(7, 6)
        assert bound_cor55(3, 2).value == Fraction(65, 54)
        assert bound_cor55(2, 1).conditional

    @pytest.mark.parametrize("d,L,r", [(1, 3, 2), (2, 4, 4), (2, 5, 3), (3, 6, 4), (3, 9, 5)])
    def test_agrees_with_theta_nef_in_rank_one(self, d, L, r):
        form, cone, H = lattice(d)
        theta = max_theta(form, cone, L * H, [H] * r).value
        assert bound_thm54(form, L * H, [H] * r, theta).value == bound_cor55(d, theta).value
