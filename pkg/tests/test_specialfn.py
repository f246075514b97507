"""Special-function recurrences against scipy/mpmath oracles."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_genlaguerre, eval_hermite

from pbk.specialfn import (
    MAX_DEGREE,
    hermite,
    hermite_function,
    hermite_function_sequence,
    laguerre,
    theta3,
)


class TestHermite:
    @pytest.mark.parametrize("n", [0, 1, 2, 3, 7, 15, 30])
    def test_matches_scipy(self, n):
        x = np.linspace(-4.0, 4.0, 17)
        expected = eval_hermite(n, x)
        np.testing.assert_allclose(hermite(n, x), expected, rtol=1e-12)

    def test_low_orders_explicit(self):
        assert hermite(0, 1.7) == 1.0
        assert hermite(1, 1.7) == pytest.approx(3.4)
        assert hermite(2, 1.7) == pytest.approx(4 * 1.7**2 - 2)
        assert hermite(3, 0.5) == pytest.approx(8 * 0.125 - 12 * 0.5)

    @given(n=st.integers(0, 40), x=st.floats(-5, 5))
    def test_parity(self, n, x):
        assert hermite(n, -x) == pytest.approx(
            (-1) ** n * hermite(n, x), rel=1e-9, abs=1e-9
        )

    @given(n=st.integers(1, 40), x=st.floats(-5, 5))
    def test_three_term_recurrence(self, n, x):
        lhs = hermite(n + 1, x)
        rhs = 2 * x * hermite(n, x) - 2 * n * hermite(n - 1, x)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-6)

    def test_scalar_in_scalar_out(self):
        assert isinstance(hermite(4, 0.3), float)
        assert isinstance(hermite(4, np.array([0.3, 0.4])), np.ndarray)

    def test_degree_validation(self):
        with pytest.raises(ValueError):
            hermite(-1, 0.0)
        with pytest.raises(ValueError):
            hermite(MAX_DEGREE + 1, 0.0)
        with pytest.raises(TypeError):
            hermite(2.5, 0.0)


class TestLaguerre:
    @pytest.mark.parametrize("n,k", [(0, 0), (1, 0), (5, 0), (5, 2), (12, 3), (30, 1)])
    def test_matches_scipy(self, n, k):
        x = np.linspace(-3.0, 3.0, 13)
        np.testing.assert_allclose(
            laguerre(n, k, x), eval_genlaguerre(n, k, x), rtol=1e-11, atol=1e-11
        )

    @given(n=st.integers(0, 30), k=st.integers(0, 5))
    def test_value_at_zero_is_binomial(self, n, k):
        assert laguerre(n, k, 0.0) == pytest.approx(math.comb(n + k, n), rel=1e-12)

    def test_negative_argument_all_terms_positive(self):
        # the norm law feeds in -2 beta^2 sigma^2 < 0, where L_n grows
        vals = [laguerre(n, 0, -0.045) for n in range(40)]
        assert all(v >= 1.0 for v in vals)
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_superscript_bound(self):
        with pytest.raises(ValueError):
            laguerre(2, -3, 0.5)


class TestTheta3:
    def test_reference_values(self):
        # q = 0.1: only m = 1, 2 contribute above the 1e-16 term cutoff
        assert theta3(0.0, 0.1) == pytest.approx(1.2002000020000002, abs=1e-16)
        assert theta3(math.pi / 2, 0.1) == pytest.approx(0.8001999980000002, abs=1e-16)

    @pytest.mark.parametrize("q", [0.0, 0.05, 0.3, 0.7, 0.95])
    def test_matches_mpmath(self, q):
        for u in np.linspace(0.0, math.pi, 9):
            expected = float(mpmath.jtheta(3, u, q))
            assert theta3(u, q) == pytest.approx(expected, rel=1e-13, abs=1e-13)

    @given(u=st.floats(-10, 10), q=st.floats(0.0, 0.9))
    @settings(max_examples=60)
    def test_symmetry_and_period(self, u, q):
        assert theta3(-u, q) == pytest.approx(theta3(u, q), rel=1e-12)
        assert theta3(u + math.pi, q) == pytest.approx(theta3(u, q), rel=1e-9, abs=1e-12)

    def test_q_zero_is_one(self):
        x = np.linspace(-2, 2, 7)
        np.testing.assert_array_equal(theta3(x, 0.0), np.ones_like(x))

    def test_nome_validation(self):
        with pytest.raises(ValueError):
            theta3(0.0, 1.0)
        with pytest.raises(ValueError):
            theta3(0.0, -0.2)

    def test_vectorized(self):
        u = np.linspace(0, 1, 5)
        out = theta3(u, 0.4)
        assert out.shape == u.shape


class TestHermiteFunction:
    def test_ground_state(self):
        u = np.linspace(-3, 3, 11)
        expected = math.pi**-0.25 * np.exp(-0.5 * u**2)
        np.testing.assert_allclose(hermite_function(0, u), expected, rtol=1e-14)

    def test_first_excited(self):
        u = 0.8
        expected = math.sqrt(2) * u * math.pi**-0.25 * math.exp(-0.5 * u * u)
        assert hermite_function(1, u) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.parametrize("n", [0, 1, 5, 40, 120, 200])
    def test_unit_norm(self, n):
        # the mass of psi_n lives inside |u| < sqrt(2n+1) + a few
        half = math.sqrt(2 * n + 1) + 8.0
        u = np.linspace(-half, half, 40001)
        vals = hermite_function(n, u)
        norm_sq = np.trapezoid(vals**2, u)
        assert norm_sq == pytest.approx(1.0, abs=1e-10)

    def test_no_overflow_at_cap(self):
        vals = hermite_function(200, np.linspace(-25, 25, 101))
        assert np.all(np.isfinite(vals))
        assert np.max(np.abs(vals)) < 1.0

    def test_far_tail_underflows_to_zero(self):
        assert hermite_function(0, 60.0) == 0.0

    def test_sequence_agrees_with_single(self):
        u = np.linspace(-4, 4, 9)
        table = hermite_function_sequence(12, u)
        assert table.shape == (13, 9)
        for n in (0, 3, 12):
            np.testing.assert_array_equal(table[n], hermite_function(n, u))

    def test_orthogonality_spot_check(self):
        u = np.linspace(-15, 15, 60001)
        table = hermite_function_sequence(6, u)
        overlap = np.trapezoid(table[2] * table[5], u)
        assert abs(overlap) < 1e-12
