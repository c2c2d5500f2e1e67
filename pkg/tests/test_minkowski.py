import numpy as np
import pytest
from hypothesis import given, strategies as st

from nilscroll import correspondence as co
from nilscroll import minkowski as mk
from nilscroll.errors import DegenerateMetric, ValidationError
from nilscroll.frames import F0, F0_ORIENTED


class TestLorentzGroup:
    @given(st.floats(-2, 2), st.sampled_from([1, 2]))
    def test_boost(self, r, axis):
        assert mk.is_special_lorentz(mk.boost(r, axis))

    @given(st.floats(0, 2 * np.pi))
    def test_rotation(self, a):
        assert mk.is_special_lorentz(mk.rotation(a))

    @given(st.integers(0, 10_000))
    def test_random(self, seed):
        assert mk.is_special_lorentz(mk.random_so21(np.random.default_rng(seed)))

    def test_reflections(self):
        P = np.diag([1.0, 1.0, -1.0])
        assert mk.is_lorentz(P) and not mk.is_special_lorentz(P)
        assert not mk.is_lorentz(np.eye(2))
        assert not mk.is_lorentz(2 * np.eye(3))

    def test_bad_axis(self):
        with pytest.raises(ValidationError):
            mk.boost(0.1, 0)

    def test_matrix_json(self):
        assert np.allclose(mk.matrix_from_json(list(range(9))), np.arange(9).reshape(3, 3))
        with pytest.raises(ValidationError):
            mk.matrix_from_json([1, 2, 3])

    @given(st.integers(0, 1000))
    def test_cross_product_identity(self, seed):
        v, w, z = np.random.default_rng(seed).normal(size=(3, 3))
        assert mk.mink_inner(mk.mink_cross(v, w), z) == pytest.approx(np.linalg.det(np.stack([v, w, z], -1)),
                                                                      abs=1e-9)


class TestBScroll:
    @pytest.mark.parametrize("k1", [0.0, np.sin], ids=["flat", "sin"])
    def test_mean_curvature_is_k2(self, k1):
        fr = mk.integrate_mink_frame(k1, 0.5, init=F0)
        d = mk.surface_data(mk.BScroll(fr), np.linspace(-1, 1, 11), np.linspace(-1, 1, 11))
        assert np.max(np.abs(d.H - 0.5)) <= 1e-4

    def test_orientation_flips_sign(self):
        fr = mk.integrate_mink_frame(0.0, 0.5, init=F0_ORIENTED)
        d = mk.surface_data(mk.BScroll(fr), np.linspace(-1, 1, 5), np.linspace(-1, 1, 5))
        assert np.max(np.abs(d.H + 0.5)) <= 1e-4

    def test_t_independence_general_k2(self):
        fr = mk.integrate_mink_frame(np.sin, lambda s: 0.3 + 0.1 * np.asarray(s), init=F0)
        s = np.linspace(-1, 1, 9)
        d = mk.surface_data(mk.BScroll(fr), s, np.linspace(-1, 1, 9))
        assert np.max(np.abs(np.abs(d.H) - (0.3 + 0.1 * s)[:, None])) <= 1e-4

    def test_base_curve(self):
        fr = mk.integrate_mink_frame(0.0, 0.5, init=F0)
        s = np.linspace(-1, 1, 5)
        assert np.allclose(fr.gamma.value(s), s[:, None] * F0[:, 0], atol=1e-12)
        assert fr.gram_drift() < 1e-12

    def test_partials(self):
        fr = mk.integrate_mink_frame(np.sin, 0.5, init=F0)
        P = mk.BScroll(fr)
        s, t, h = np.array(0.3), np.array(0.7), 1e-6
        Ps, Pt = P.partials(s, t)
        assert np.allclose(Ps, (P(s + h, t) - P(s - h, t)) / (2 * h), atol=1e-8)
        assert np.allclose(Pt, (P(s, t + h) - P(s, t - h)) / (2 * h), atol=1e-8)

    def test_null_chart_structure(self, mink_sin_frame):
        P = mk.BScroll(mink_sin_frame)
        ch = co.bscroll_chart()
        d = mk.surface_data(lambda x, y: P(*ch.st(x, y)), np.linspace(-1, 1, 41), np.linspace(0.5, 2, 41),
                            null_chart=True)
        assert np.max(np.abs(np.abs(d.H) - 0.5)) <= 1e-4
        assert np.max(d.gauss_residual) < 1e-3
        assert np.max(d.codazzi_residual) < 1e-3
        # B-scrolls have one null component of Q vanishing
        assert np.max(np.abs(d.Q.lbarpart)) < 1e-5

    def test_degenerate(self):
        with pytest.raises(DegenerateMetric):
            mk.surface_data(lambda u, v: np.stack([u, u, 0 * v], -1), [0.0, 1.0], [0.0, 1.0])
