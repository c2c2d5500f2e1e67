import numpy as np
import pytest
from hypothesis import given, strategies as st

from nilscroll.curves import (AnalyticCurve, ReparamCurve, SampledCurve, ScaledCurve, as_curve, eval_scalar, flip3,
                              quintic_hermite, scalar_derivative, simpson_cumulative)
from nilscroll.errors import ValidationError


def helix():
    return AnalyticCurve(lambda s: np.stack([np.cos(s), np.sin(s), s], axis=-1),
                         lambda s: np.stack([-np.sin(s), np.cos(s), np.ones_like(s)], axis=-1),
                         lambda s: np.stack([-np.cos(s), -np.sin(s), np.zeros_like(s)], axis=-1))


class TestSampledCurve:
    def test_spline_accuracy(self):
        s = np.linspace(0, 2, 201)
        c = SampledCurve(s, helix().value(s))
        u = np.linspace(0.1, 1.9, 37)
        assert np.max(np.abs(c.value(u) - helix().value(u))) < 1e-8
        assert np.max(np.abs(c.d1(u) - helix().d1(u))) < 1e-6

    def test_quintic_is_c2_and_exact_for_quintics(self):
        s = np.linspace(-1, 1, 9)
        y = np.stack([s ** 5, s ** 4, s], axis=-1)
        d1 = np.stack([5 * s ** 4, 4 * s ** 3, np.ones_like(s)], axis=-1)
        d2 = np.stack([20 * s ** 3, 12 * s ** 2, np.zeros_like(s)], axis=-1)
        c = SampledCurve(s, y, d1, d2)
        u = np.linspace(-0.99, 0.99, 41)
        assert np.max(np.abs(c.value(u)[:, 0] - u ** 5)) < 1e-13
        knot, eps = s[3], 1e-9
        assert np.allclose(c.d2(knot - eps), c.d2(knot + eps), atol=1e-6)

    def test_quintic_hermite_matches_data(self):
        s = np.array([0.0, 0.5, 1.5])
        y = np.array([[0.0], [1.0], [-1.0]])
        P = quintic_hermite(s, y, np.array([[1.0], [0.0], [2.0]]), np.array([[0.0], [3.0], [-1.0]]))
        assert np.allclose(P(s), y)
        assert np.allclose(P(s, 1), [[1.0], [0.0], [2.0]])
        assert np.allclose(P(s, 2), [[0.0], [3.0], [-1.0]])

    @pytest.mark.parametrize("s", [np.array([0.0, 1.0, 2.0]), np.array([0.0, 1.0, 1.0, 2.0]),
                                   np.array([0.0, 2.0, 1.0, 3.0])])
    def test_rejects_bad_grids(self, s):
        with pytest.raises(ValidationError):
            SampledCurve(s, np.zeros((len(s), 3)))

    def test_rejects_bad_shape(self):
        with pytest.raises(ValidationError):
            SampledCurve(np.arange(5.0), np.zeros((5, 2)))

    def test_span(self):
        assert SampledCurve(np.linspace(-1, 3, 5), np.zeros((5, 3))).span == (-1.0, 3.0)


class TestCurveOps:
    def test_flip3(self):
        c = flip3(helix())
        assert np.allclose(c.value(0.5), [np.cos(0.5), np.sin(0.5), -0.5])
        assert np.allclose(c.d1(0.5)[2], -1.0)

    def test_scaled_derivatives_fd_fallback(self):
        c = ScaledCurve(helix(), lambda s: np.exp(s))
        exact = np.exp(0.3) * (helix().value(0.3) + 2 * helix().d1(0.3) + helix().d2(0.3))
        assert np.allclose(c.d2(0.3), exact, atol=1e-5)

    @given(st.floats(0.2, 3.0), st.floats(-1, 1))
    def test_reparam_chain_rule(self, lam, s):
        c = ReparamCurve(helix(), lam)
        assert np.allclose(c.d1(s), lam * helix().d1(lam * s))

    def test_analytic_fd_fallback(self):
        c = AnalyticCurve(lambda s: np.stack([s ** 3, s, 0 * s], axis=-1))
        assert np.allclose(c.d1(np.array(2.0)), [12.0, 1.0, 0.0], atol=1e-6)
        assert np.allclose(c.d2(np.array(2.0)), [12.0, 0.0, 0.0], atol=1e-3)

    def test_constant_curve(self):
        c = as_curve([1.0, 2.0, 3.0])
        assert np.allclose(c.value(np.zeros(4)), [[1, 2, 3]] * 4)
        assert np.allclose(c.d1(np.zeros(2)), 0)

    def test_eval_scalar(self):
        assert np.allclose(eval_scalar(2.0, np.zeros(3)), 2.0)
        assert np.allclose(eval_scalar(lambda s: 1.0, np.zeros(3)), 1.0)
        assert np.allclose(scalar_derivative(np.sin, np.array([0.0])), 1.0)


class TestSimpson:
    def test_exact_for_cubics(self):
        s = np.linspace(-1, 2, 7)
        f = lambda u: u ** 3 - u
        out = simpson_cumulative(s, f(s), f(0.5 * (s[:-1] + s[1:])), 2)
        exact = (s ** 4 / 4 - s ** 2 / 2) - (s[2] ** 4 / 4 - s[2] ** 2 / 2)
        assert np.allclose(out, exact, atol=1e-13)
        assert out[2] == 0.0
