import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fdcsi.errors import DomainError
from fdcsi.specfun import bessel_i0_scaled, bessel_j0, marcum_q1

from oracles import bisect, i0_series, i0e_trapezoid, j0_series, marcum_q1_integral


# expected values frozen from tests/oracles.py
J0_AT_1 = 0.7651976865579666  # exact rational series, 60 terms
I0E_AT_1 = 0.4657596075936405  # e^-1 times the I0 series
Q1_AT_1_1 = 0.7328798037970449  # fixed-step Simpson on the Rician density


class TestBesselJ0:
    def test_origin(self):
        assert bessel_j0(0.0) == 1.0

    def test_at_one(self):
        assert bessel_j0(1.0) == pytest.approx(J0_AT_1, abs=1e-12)

    def test_first_zero(self):
        zero = bisect(j0_series, 2.0, 3.0)
        assert abs(zero - 2.404826) < 1e-5
        assert abs(bessel_j0(2.404826)) < 1e-5

    def test_matches_series_oracle_on_series_range(self):
        xs = np.linspace(0.0, 8.0, 161)
        ref = np.array([j0_series(x) for x in xs])
        assert np.max(np.abs(bessel_j0(xs) - ref)) < 1e-10

    @pytest.mark.parametrize("x", [8.0, 9.5, 12.0, 20.0, 35.0])
    def test_large_argument_branch_against_exact_series(self, x):
        # the rational series loses nothing to cancellation
        assert bessel_j0(x) == pytest.approx(j0_series(x, terms=200), abs=1e-10)

    def test_scalar_in_scalar_out(self):
        assert isinstance(bessel_j0(3.0), float)
        assert bessel_j0(np.array([0.0, 1.0])).shape == (2,)

    @given(st.floats(-100, 100))
    def test_even_and_bounded(self, x):
        assert bessel_j0(x) == bessel_j0(-x)
        assert abs(bessel_j0(x)) <= 1.0

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            bessel_j0(math.nan)
        with pytest.raises(DomainError):
            bessel_j0(np.array([1.0, np.inf]))


class TestBesselI0Scaled:
    def test_origin(self):
        assert bessel_i0_scaled(0.0) == 1.0

    def test_at_one(self):
        assert bessel_i0_scaled(1.0) == pytest.approx(I0E_AT_1, rel=1e-12)

    def test_large_x_asymptote(self):
        assert bessel_i0_scaled(50.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi * 50.0), rel=0.01)

    @pytest.mark.parametrize("x", [0.5, 5.0, 29.9, 30.1, 45.0, 120.0, 400.0, 700.0])
    def test_relative_accuracy(self, x):
        assert bessel_i0_scaled(x) == pytest.approx(i0e_trapezoid(x), rel=1e-10)

    def test_series_oracle_agrees_below_crossover(self):
        for x in (0.25, 3.0, 12.0, 29.0):
            assert bessel_i0_scaled(x) == pytest.approx(i0_series(x) * math.exp(-x), rel=1e-13)

    @given(st.floats(0, 700))
    def test_range(self, x):
        v = bessel_i0_scaled(x)
        assert 0 < v <= 1

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            bessel_i0_scaled(-1.0)


class TestMarcumQ1:
    def test_b_zero_is_one(self):
        for a in (0.0, 0.3, 4.0, 50.0):
            assert marcum_q1(a, 0.0) == 1.0

    def test_a_zero_closed_form(self):
        assert marcum_q1(0.0, 1.0) == pytest.approx(math.exp(-0.5), abs=1e-12)
        b = np.round(np.arange(0, 5.01, 0.1), 10)
        assert np.max(np.abs(marcum_q1(0.0, b) - np.exp(-b * b / 2))) <= 1e-12

    def test_unit_arguments(self):
        assert marcum_q1(1.0, 1.0) == pytest.approx(Q1_AT_1_1, abs=1e-9)

    def test_grid_against_integral_oracle(self):
        g = np.linspace(0.0, 10.0, 20)
        worst = max(abs(marcum_q1(a, b) - marcum_q1_integral(a, b)) for a in g for b in g)
        assert worst < 1e-8

    @pytest.mark.parametrize("a,b", [(60.0, 75.0), (75.0, 60.0), (40.0, 48.5), (48.5, 40.0)])
    def test_asymptotic_branch_saturates(self, a, b):
        q = marcum_q1(a, b)
        assert q == pytest.approx(0.0 if b > a else 1.0, abs=1e-14)

    def test_crossover_continuity(self):
        # both sides of |b - a| = 8 agree with the series to far below 1e-9
        for a in (10.0, 30.0, 100.0):
            lo = marcum_q1(a, a + 8.0 - 1e-9)
            hi = marcum_q1(a, a + 8.0 + 1e-9)
            assert abs(lo - hi) < 1e-13

    def test_broadcasting(self):
        out = marcum_q1(np.array([[0.5], [2.0]]), np.array([0.0, 1.0, 3.0]))
        assert out.shape == (2, 3)
        assert isinstance(marcum_q1(1.0, 2.0), float)

    @settings(max_examples=200)
    @given(st.floats(0, 30), st.floats(0, 30), st.floats(0.0, 2.0))
    def test_monotone(self, a, b, step):
        q = marcum_q1(a, b)
        assert 0.0 <= q <= 1.0
        assert marcum_q1(a + step, b) >= q - 1e-13
        assert marcum_q1(a, b + step) <= q + 1e-13

    @pytest.mark.parametrize("a", [0.0, 1.5, 6.0])
    def test_complement_is_a_cdf_in_b(self, a):
        b = np.linspace(0, a + 12, 400)
        cdf = 1.0 - marcum_q1(a, b)
        assert cdf[0] == 0.0
        assert cdf[-1] == pytest.approx(1.0, abs=1e-12)
        assert np.all(np.diff(cdf) >= -1e-15)

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            marcum_q1(-0.1, 1.0)
        with pytest.raises(DomainError):
            marcum_q1(1.0, -0.1)
