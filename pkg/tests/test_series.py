import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cartier import NotAUnit, PadicContext
from cartier.series import TruncSeries

U3 = PadicContext.unramified(3)
U5 = PadicContext.unramified(5)
D3 = PadicContext.dwork(3)


def geometric(ctx, order):
    return TruncSeries.from_coeffs(ctx, [1] * order)


def series_strategy(ctx, order=12, max_num=30):
    body = st.lists(
        st.fractions(min_value=-max_num, max_value=max_num, max_denominator=8),
        min_size=order,
        max_size=order,
    )
    return st.builds(lambda cs: TruncSeries.from_coeffs(ctx, cs), body)


def unit_series(ctx, order=12):
    return series_strategy(ctx, order).map(
        lambda f: TruncSeries((ctx.one(),) + f.coeffs[1:], ctx)
    )


class TestBasics:
    def test_delta(self):
        f = TruncSeries.from_coeffs(U3, [1, 2, 3])
        assert f.delta() == TruncSeries.from_coeffs(U3, [0, 2, 6])
        assert TruncSeries.one(U3, 5).delta().is_zero()

    def test_d_dz_drops_order(self):
        f = TruncSeries.from_coeffs(U3, [7, 0, 1, 0])
        g = f.d_dz()
        assert g.order == 3
        assert g == TruncSeries.from_coeffs(U3, [0, 2, 0])
        assert geometric(U3, 6).d_dz() == TruncSeries.from_coeffs(U3, [1, 2, 3, 4, 5])

    def test_mul_truncates_to_common_order(self):
        f = geometric(U3, 8)
        g = TruncSeries.from_coeffs(U3, [1, -1])
        assert (f * g) == TruncSeries.from_coeffs(U3, [1, 0])

    def test_scalar_mul(self):
        f = geometric(U5, 4)
        assert (f * Fraction(1, 2))[3] == U5.coeff(Fraction(1, 2))
        assert (3 * f)[0] == U5.coeff(3)


class TestCartier:
    def test_read_off_definition(self):
        f = TruncSeries.from_coeffs(U3, [0, 0, 0, 1, 2, 0, 5])  # z^3+2z^4+5z^6
        assert f.cartier() == TruncSeries.from_coeffs(U3, [0, 1, 5])

    def test_geometric_fixed_point(self):
        f = geometric(U3, 27)
        assert f.cartier() == geometric(U3, 9)

    def test_order_shrinks_by_p(self):
        assert geometric(U5, 11).cartier().order == 3  # ceil(11/5)

    @given(f=series_strategy(U3, order=15))
    @settings(max_examples=60, deadline=None)
    def test_commutation_with_delta(self, f):
        # Lambda_p(delta f) = p * delta(Lambda_p f)
        lhs = f.delta().cartier()
        rhs = f.cartier().delta() * 3
        assert lhs == rhs

    @given(g=series_strategy(U3, order=18), h=series_strategy(U3, order=6))
    @settings(max_examples=40, deadline=None)
    def test_projection_formula(self, g, h):
        # Lambda_p(g * h(z^p)) = Lambda_p(g) * h
        lhs = (g * h.subst_zpk(1)).cartier()
        rhs = g.cartier() * h
        n = min(lhs.order, rhs.order)
        assert lhs.truncate(n) == rhs.truncate(n)

    @given(f=series_strategy(U5, order=9))
    @settings(max_examples=30, deadline=None)
    def test_section_property(self, f):
        assert f.subst_zpk(1).cartier() == f


class TestSubst:
    def test_simple(self):
        f = TruncSeries.from_coeffs(U5, [1, 1])
        g = f.subst_zpk(1)
        assert g.order == 10
        assert [c for c in g.coeffs] == [U5.coeff(v) for v in [1, 0, 0, 0, 0, 1, 0, 0, 0, 0]]

    def test_identity_at_k_zero(self):
        f = geometric(U5, 7)
        assert f.subst_zpk(0) is f


class TestUnits:
    def test_invert_geometric(self):
        f = TruncSeries.from_coeffs(U3, [1, -1, 0, 0, 0])
        assert f.invert_unit() == geometric(U3, 5)

    def test_invert_requires_unit(self):
        with pytest.raises(NotAUnit):
            TruncSeries.from_coeffs(U3, [0, 1]).invert_unit()

    @given(f=unit_series(U3))
    @settings(max_examples=50, deadline=None)
    def test_invert_round_trip(self, f):
        assert f * f.invert_unit() == TruncSeries.one(U3, f.order)

    @given(f=unit_series(D3, order=8))
    @settings(max_examples=25, deadline=None)
    def test_invert_round_trip_ramified(self, f):
        assert f * f.invert_unit() == TruncSeries.one(D3, f.order)

    def test_log_derivative_of_geometric(self):
        # (1/(1-z))'/(1/(1-z)) = 1/(1-z)
        f = geometric(U3, 10)
        assert f.log_derivative() == geometric(U3, 9)

    @given(f=unit_series(U5, order=9), g=unit_series(U5, order=9))
    @settings(max_examples=40, deadline=None)
    def test_log_derivative_additivity(self, f, g):
        lhs = (f * g).log_derivative()
        rhs = f.log_derivative() + g.log_derivative()
        assert lhs == rhs


class TestHadamard:
    def test_identity_element(self):
        g = TruncSeries.from_coeffs(U3, [4, 9, Fraction(1, 2), 7])
        assert geometric(U3, 4).hadamard(g) == g

    def test_annihilator(self):
        g = geometric(U3, 5)
        assert g.hadamard(TruncSeries.zero(U3, 5)).is_zero()


class TestCongruence:
    def test_reflexive(self):
        f = geometric(U5, 6)
        assert f.congruent_mod(f, 3, upto=6)

    def test_detects_p_multiples(self):
        one = TruncSeries.one(U5, 4)
        g = TruncSeries.from_coeffs(U5, [1, 5, 0, 0])
        h = TruncSeries.from_coeffs(U5, [1, 1, 0, 0])
        assert one.congruent_mod(g, 1, upto=4)
        assert not one.congruent_mod(g, 2, upto=4)
        assert not one.congruent_mod(h, 1, upto=4)
        assert one.first_discrepancy(h, 1, upto=4) == 1

    def test_window_must_be_reliable(self):
        f = geometric(U5, 6)
        with pytest.raises(ValueError):
            f.congruent_mod(f.truncate(3), 1, upto=5)


class TestSerialization:
    def test_round_trip_unramified(self):
        f = TruncSeries.from_coeffs(U5, [1, Fraction(-2, 3), 0])
        assert TruncSeries.from_json_dict(f.to_json_dict()) == f

    def test_round_trip_dwork(self):
        pi = D3.pi()
        f = TruncSeries((D3.one(), pi, pi * pi * Fraction(1, 2)), D3)
        data = f.to_json_dict()
        assert data["ramification"] == "dwork"
        assert TruncSeries.from_json_dict(data) == f
