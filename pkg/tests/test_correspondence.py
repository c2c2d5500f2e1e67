import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nilscroll import correspondence as co
from nilscroll import minkowski as mk
from nilscroll.errors import BadFrame, NotClosed, NotLorentz
from nilscroll.frames import F0, F0_ORIENTED
from nilscroll.scroll import mean_curvature

from conftest import grid

XS = np.linspace(-0.8, 0.8, 21)
YS = np.linspace(0.7, 1.8, 21)


@pytest.fixture(scope="module")
def lifted(mink_sin_frame):
    return co.bscroll_to_nil(mink_sin_frame)


@pytest.fixture(scope="module")
def chart():
    return co.bscroll_chart()


class TestLift:
    def test_lift_is_minimal(self, lifted):
        S, T = grid(lifted.domain, 9)
        assert np.max(np.abs(mean_curvature(lifted, S, T))) < 1e-8

    def test_derivatives_match_bscroll(self, lifted, chart, mink_sin_frame):
        X, Y = np.meshgrid(XS, YS, indexing="ij")
        a, b = co.to_mink(co.derivative_of(lifted, chart, method="closed"))(X, Y)
        Pa, Pb = co.mink_partials_in_chart(mk.BScroll(mink_sin_frame), chart)(X, Y)
        assert np.max(np.abs(a - Pa)) <= 1e-6
        assert np.max(np.abs(b - Pb)) <= 1e-6

    def test_fd_and_closed_derivatives_agree(self, lifted, chart):
        X, Y = np.meshgrid(XS[::4], YS[::4], indexing="ij")
        a1, b1 = co.derivative_of(lifted, chart, method="closed")(X, Y)
        a2, b2 = co.derivative_of(lifted, chart, method="fd")(X, Y)
        assert np.allclose(a1, a2, atol=1e-6) and np.allclose(b1, b2, atol=1e-6)

    def test_mink_round_trip(self, lifted, chart):
        d = co.derivative_of(lifted, chart, method="closed")
        back = co.from_mink(co.to_mink(d), chart)
        X, Y = np.meshgrid(XS[::5], YS[::5], indexing="ij")
        for u, v in zip(d(X, Y), back(X, Y)):
            assert np.array_equal(u, v)

    def test_rejects_wrong_orientation(self):
        with pytest.raises(BadFrame):
            co.bscroll_to_nil(mk.integrate_mink_frame(np.sin, 0.5, init=F0))

    def test_rejects_wrong_k2(self):
        with pytest.raises(BadFrame):
            co.bscroll_to_nil(mk.integrate_mink_frame(0.0, 0.3, init=F0_ORIENTED))


class TestIntegration:
    def test_closed(self, lifted, chart):
        d = co.derivative_of(lifted, chart, method="closed")
        X, Y = np.meshgrid(XS, YS, indexing="ij")
        assert np.max(co.closedness_residual(d, X, Y)) <= 1e-8

    def test_reintegration(self, lifted, chart):
        d = co.derivative_of(lifted, chart, method="closed")
        F = chart.compose(lifted)
        out = co.integrate_from_derivative(d, XS, YS, basepoint=F(XS[0], YS[0]))
        X, Y = np.meshgrid(XS, YS, indexing="ij")
        assert np.max(np.abs(out.points - F(X, Y))) <= 1e-7
        assert out.path_gap <= 1e-7

    def test_zero_derivative_gives_constant(self):
        zero = co.DerivativeTriple(lambda x, y: (np.zeros(np.shape(x) + (3,)), np.zeros(np.shape(x) + (3,))))
        out = co.integrate_from_derivative(zero, XS[:5], YS[:5], basepoint=(1.0, -2.0, 0.5))
        assert np.allclose(out.points, [1.0, -2.0, 0.5], atol=0)

    def test_left_translation_of_basepoint(self, lifted, chart):
        from nilscroll import nil3
        d = co.derivative_of(lifted, chart, method="closed")
        p = np.array([0.3, -0.2, 0.7])
        a = co.integrate_from_derivative(d, XS[:7], YS[:7])
        b = co.integrate_from_derivative(d, XS[:7], YS[:7], basepoint=p)
        assert np.allclose(nil3.group_mul(p, a.points), b.points, atol=1e-12)

    def test_not_closed(self):
        def partials(x, y):
            x = np.asarray(x, dtype=float)
            z = np.zeros(np.shape(x) + (3,))
            b = z.copy()
            b[..., 0] = x
            return z, b
        with pytest.raises(NotClosed):
            co.integrate_from_derivative(co.DerivativeTriple(partials), XS[:5], YS[:5])


class TestGauge:
    def test_not_lorentz(self, lifted, chart):
        with pytest.raises(NotLorentz):
            co.gauge_transform(lifted, chart, np.diag([2.0, 1.0, 1.0]))

    def test_identity(self, lifted, chart):
        g = co.gauge_transform(lifted, chart, np.eye(3))
        X, Y = np.meshgrid(XS[::5], YS[::5], indexing="ij")
        for u, v in zip(g.derivative(X, Y), g.original(X, Y)):
            assert np.allclose(u, v, atol=1e-15)

    @settings(max_examples=10)
    @given(st.integers(0, 10_000))
    def test_invariants(self, lifted, chart, seed):
        M = mk.random_so21(np.random.default_rng(seed))
        g = co.gauge_transform(lifted, chart, M)
        X, Y = np.meshgrid(XS[::2], YS[::2], indexing="ij")
        r = co.gauge_residuals(g, X, Y)
        assert r["maskFraction"] < 0.5
        assert r["H"] <= 1e-6
        assert r["support"] <= 1e-10
        assert r["ar"] <= 1e-6

    def test_reintegrated_surface(self, lifted, chart):
        g = co.gauge_transform(lifted, chart, mk.boost(0.4) @ mk.rotation(1.0), XS, YS)
        assert g.surface.path_gap <= 1e-7 and g.surface.closedness <= 1e-8

    def test_degenerate_points_are_masked(self, lifted, chart):
        g = co.gauge_transform(lifted, chart, mk.boost(0.4))
        X, Y = np.meshgrid(XS[::4], YS[::4], indexing="ij")
        assert co.gauge_residuals(g, X, Y, mask_tol=np.inf)["maskFraction"] == 1.0
