import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from nilscroll import nil3
from nilscroll.curves import AnalyticCurve

vec = arrays(np.float64, 3, elements=st.floats(min_value=-5, max_value=5, allow_nan=False))
E = np.eye(3)


class TestGroup:
    def test_group_law_frozen(self):
        p = nil3.group_mul([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
        assert np.allclose(p, [5.0, 7.0, 9.0 + 0.5 * (5.0 - 8.0)])

    @given(vec, vec, vec)
    def test_associative(self, p, q, r):
        lhs = nil3.group_mul(nil3.group_mul(p, q), r)
        rhs = nil3.group_mul(p, nil3.group_mul(q, r))
        assert np.allclose(lhs, rhs, atol=1e-10)

    @given(vec)
    def test_inverse(self, p):
        assert np.allclose(nil3.group_mul(p, nil3.group_inv(p)), nil3.identity())
        assert np.allclose(nil3.group_mul(nil3.group_inv(p), p), nil3.identity())

    @given(vec)
    def test_exp_log(self, v):
        assert np.allclose(nil3.lie_log(nil3.lie_exp(v)), v)

    @given(vec, st.floats(-2, 2), st.floats(-2, 2))
    def test_one_parameter_subgroup(self, v, a, b):
        lhs = nil3.group_mul(nil3.lie_exp(a * v), nil3.lie_exp(b * v))
        assert np.allclose(lhs, nil3.lie_exp((a + b) * v), atol=1e-10)


class TestMetric:
    def test_signature(self):
        assert np.allclose([nil3.metric(E[i], E[i]) for i in range(3)], [-1.0, 1.0, 1.0])

    @given(vec, vec)
    def test_cross_orthogonal(self, v, w):
        c = nil3.cross(v, w)
        scale = 1.0 + np.abs(v).max() * np.abs(w).max() * max(np.abs(v).max(), np.abs(w).max())
        assert abs(nil3.metric(c, v)) <= 1e-10 * scale
        assert abs(nil3.metric(c, w)) <= 1e-10 * scale

    @given(vec, vec, vec)
    def test_cross_determinant(self, v, w, z):
        assert nil3.metric(nil3.cross(v, w), z) == pytest.approx(nil3.det3(v, w, z), abs=1e-9)

    @given(vec, vec)
    def test_cross_antisymmetric(self, v, w):
        assert np.allclose(nil3.cross(v, w), -nil3.cross(w, v))

    def test_orientation_frozen(self):
        # g(E1 x E2, E3) = det = 1
        assert np.allclose(nil3.cross(E[0], E[1]), E[2])
        assert np.allclose(nil3.cross(E[1], E[2]), -E[0])


class TestConnection:
    @pytest.mark.parametrize("i", range(3))
    @pytest.mark.parametrize("j", range(3))
    @pytest.mark.parametrize("k", range(3))
    def test_metric_compatible(self, i, j, k):
        lhs = nil3.metric(nil3.connection(E[i], E[j]), E[k]) + nil3.metric(E[j], nil3.connection(E[i], E[k]))
        assert lhs == 0

    def test_torsion_free(self):
        bracket = nil3.connection(E[0], E[1]) - nil3.connection(E[1], E[0])
        assert np.allclose(bracket, E[2])
        assert np.allclose(nil3.connection(E[0], E[2]) - nil3.connection(E[2], E[0]), 0)
        assert np.allclose(nil3.connection(E[1], E[2]) - nil3.connection(E[2], E[1]), 0)

    def test_gamma_table(self):
        assert np.allclose(nil3.connection(E[0], E[1]), 0.5 * E[2])
        assert np.allclose(nil3.connection(E[1], E[2]), -0.5 * E[0])
        assert np.allclose(nil3.connection(E[2], E[2]), 0)

    def test_covariant_derivative_of_frame_field_along_curve(self):
        # X = E2 constant in frame, curve with velocity E1: nabla X = Gamma(E1, E2) = E3/2
        def X(u):
            return E[1]

        def vel(u):
            return E[0]

        assert np.allclose(nil3.covariant_derivative(X, vel, [0.3], 0), 0.5 * E[2])


class TestFrameConversion:
    @given(vec, vec)
    def test_roundtrip(self, p, v):
        assert np.allclose(nil3.from_frame(p, nil3.to_frame(p, v)), v)

    @given(vec, vec, vec)
    def test_left_invariance(self, g, p, v):
        # left translation L_g has differential taking v at p to a vector with the same frame components
        h = 1e-6
        q0 = nil3.group_mul(g, p)
        q1 = nil3.group_mul(g, p + h * v)
        dv = (q1 - q0) / h
        assert np.allclose(nil3.to_frame(q0, dv), nil3.to_frame(p, v), atol=1e-5 * (1 + np.abs(g).max() ** 2))

    def test_left_translate_velocity_analytic_and_fd(self):
        c = AnalyticCurve(lambda s: np.stack([np.sin(s), s ** 2, np.cos(s)], axis=-1),
                          lambda s: np.stack([np.cos(s), 2 * s, -np.sin(s)], axis=-1))
        s = np.array([0.2, 0.9])
        exact = nil3.left_translate_velocity(c, s)
        fd = nil3.left_translate_velocity(lambda u: c.value(u), s)
        assert np.allclose(exact, fd, atol=1e-8)
