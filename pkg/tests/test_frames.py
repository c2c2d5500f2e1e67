import numpy as np
import pytest

from nilscroll import construct as C
from nilscroll import frames, nil3
from nilscroll.curves import AnalyticCurve, ScaledCurve, flip3
from nilscroll.errors import BadFrame, BadInitialFrame, MixedBeta, NotNull, ValidationError, ZeroRuling
from nilscroll.frames import F0, F0_ORIENTED, GRAM0
from nilscroll.nullcurve import (Ruling, compute_beta, extract_curvatures, frame_from_curves, integrate_frame_system,
                                 normalize_ruling, reconstruct_curve)


class TestInitialFrame:
    def test_f0_pairings(self):
        assert np.allclose(frames.gram(F0), GRAM0)
        assert np.allclose(frames.gram(F0_ORIENTED), GRAM0)

    def test_orientations(self):
        assert np.linalg.det(F0) == pytest.approx(-1.0)
        assert np.linalg.det(F0_ORIENTED) == pytest.approx(1.0)
        A, B, C = F0_ORIENTED.T
        assert np.allclose(nil3.cross(A, B), C)

    def test_rejects_non_null_frame(self):
        with pytest.raises(BadInitialFrame):
            frames.check_initial_frame(np.eye(3))
        with pytest.raises(BadInitialFrame):
            frames.check_initial_frame(np.eye(2))

    def test_grid_contains_s0(self):
        s, i0 = frames.make_grid((-1.0, 2.0), 0.3, 0.5)
        assert s[i0] == 0.5 and s[0] == -1.0 and s[-1] == 2.0
        with pytest.raises(ValidationError):
            frames.make_grid((0.0, 1.0), 0.1, 2.0)


class TestIntegration:
    def test_gram_conservation(self):
        fr = integrate_frame_system(np.sin, 0.5, F0, (-2, 2), 1e-3)
        assert fr.gram_drift() <= 1e-8
        assert fr.gram_errors().shape == fr.s.shape

    def test_constant_curvature_closed_form(self):
        # k1 = 0, k2 = 1/2: A' = 0, B' = C/2, C' = -A/2
        fr = integrate_frame_system(0.0, 0.5, F0_ORIENTED, (-1, 1), 1e-2)
        A0, B0, C0 = F0_ORIENTED.T
        s = fr.s[:, None]
        assert np.allclose(fr.A, A0, atol=1e-12)
        assert np.allclose(fr.C, C0 - s / 2 * A0, atol=1e-12)
        assert np.allclose(fr.B, B0 + s / 2 * C0 - s ** 2 / 8 * A0, atol=1e-12)

    def test_extract_curvatures_roundtrip(self):
        fr = integrate_frame_system(np.sin, 0.5, F0_ORIENTED, (-2, 2), 1e-3)
        k0, k1, k2 = extract_curvatures(fr)
        s = np.linspace(-2, 2, 41)
        assert np.max(np.abs(k0(s))) < 1e-8
        assert np.max(np.abs(k1(s) - np.sin(s))) < 1e-6
        assert np.max(np.abs(k2(s) - 0.5)) < 1e-6

    def test_frame_curves_carry_derivatives(self):
        fr = integrate_frame_system(np.cos, 0.5, F0_ORIENTED, (-1, 1), 1e-3)
        A = fr.curve("A")
        s = np.linspace(-0.9, 0.9, 11)
        assert np.allclose(A.d1(s), np.cos(s)[:, None] * fr.curve("C").value(s), atol=1e-10)


class TestFrameFromCurves:
    def test_beta_half_frame(self):
        f = C.construct_beta_half(C.RulingSpec("circle"), 0.0)
        B = flip3(f.Btilde)
        Cc = AnalyticCurve(lambda s: 2 * B.d1(s), lambda s: 2 * B.d2(s))
        fr = frame_from_curves(f.A, B, Cc, (-1, 1))
        k0, k1, k2 = extract_curvatures(fr)
        s = np.linspace(-0.9, 0.9, 9)
        assert np.max(np.abs(k0(s))) < 1e-10
        assert np.allclose(k1(s), 4 * nil3.metric(B.d2(s), B.d2(s)), atol=1e-10)
        assert np.allclose(k2(s), 0.5, atol=1e-10)

    def test_rejects_non_frame(self):
        e = [AnalyticCurve(lambda s, i=i: np.broadcast_to(np.eye(3)[i], np.shape(s) + (3,))) for i in range(3)]
        with pytest.raises(BadFrame):
            frame_from_curves(*e, (-1, 1))

    def test_rejects_k0(self):
        # null frame rotated by a boost with s-dependent rapidity has k0 != 0
        A0, B0, C0 = F0_ORIENTED.T

        def A(s):
            return np.exp(np.asarray(s))[..., None] * A0

        def B(s):
            return np.exp(-np.asarray(s))[..., None] * B0

        ca = AnalyticCurve(A, lambda s: A(s))
        cb = AnalyticCurve(B, lambda s: -B(s))
        cc = AnalyticCurve(lambda s: np.broadcast_to(C0, np.shape(s) + (3,)))
        with pytest.raises(BadFrame):
            frame_from_curves(ca, cb, cc, (-1, 1))


class TestReconstruct:
    def test_circle_base_curve(self):
        A = AnalyticCurve(lambda s: np.stack([-np.ones_like(s), np.cos(s), -np.sin(s)], axis=-1),
                          lambda s: np.stack([np.zeros_like(s), -np.sin(s), -np.cos(s)], axis=-1))
        g = reconstruct_curve(A, (-2, 2), 1e-3)
        s = np.linspace(-2, 2, 21)
        exact = np.stack([-s, np.sin(s), -0.5 * s * np.sin(s)], axis=-1)
        assert np.max(np.abs(g.value(s) - exact)) < 1e-11

    def test_velocity_is_a(self):
        fr = integrate_frame_system(np.sin, 0.5, F0_ORIENTED, (-1, 1), 1e-3)
        g = reconstruct_curve(fr.curve("A"), (-1, 1), 1e-3)
        s = np.linspace(-0.9, 0.9, 13)
        assert np.allclose(nil3.left_translate_velocity(g, s), fr.curve("A").value(s), atol=1e-10)
        assert np.allclose(g.value(0.0), 0.0)


class TestBeta:
    def test_circle_beta_half(self):
        b = compute_beta(C.circle_ruling())
        assert np.allclose(b(np.linspace(-2, 2, 9)), 0.5, atol=1e-12)
        assert b.speed_residual < 1e-10

    def test_normalize_constant(self):
        r = Ruling.from_curve(ScaledCurve(C.circle_ruling(), 3.0, 0.0, 0.0))
        n = normalize_ruling(r)
        assert np.allclose(n.beta(np.linspace(-1, 1, 5)), 0.5, atol=1e-12)

    def test_normalize_variable(self):
        r = Ruling.from_curve(ScaledCurve(C.circle_ruling(), lambda s: 2 + np.sin(s), np.cos))
        n = normalize_ruling(r)
        assert np.allclose(n.beta(np.linspace(-1, 1, 5)), 0.5, atol=1e-8)

    def test_mixed_beta(self):
        # beta scales with the factor s + 1/8, which changes sign
        flipped = ScaledCurve(C.circle_ruling(), lambda s: np.asarray(s) + 0.125, 1.0)
        samples = np.linspace(-1, 1, 41)
        with pytest.raises(MixedBeta):
            normalize_ruling(Ruling.from_curve(flipped, samples), samples)

    def test_beta_zero_constant_direction(self):
        b = compute_beta(C.constant_direction_ruling((1.0, 0.6, 0.8)))
        assert np.allclose(b(np.linspace(-1, 1, 5)), 0.0)

    def test_errors(self):
        with pytest.raises(NotNull):
            compute_beta(AnalyticCurve(lambda s: np.stack([s, s, s], axis=-1) + 5.0))
        with pytest.raises(ZeroRuling):
            compute_beta(AnalyticCurve(lambda s: np.stack([s, s, 0 * s], axis=-1)))

    def test_induced_field_flips_third(self):
        r = Ruling.from_curve(C.circle_ruling())
        assert np.allclose(r.induced.value(0.3) * [1, 1, -1], r.Btilde.value(0.3))
