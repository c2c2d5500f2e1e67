"""Null frames along null curves in Nil3, curve reconstruction, and the
beta invariant of light-cone valued rulings."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from . import frames, nil3
from .curves import (Func, SampledCurve, ScaledCurve, VectorCurve, as_curve,
                     eval_scalar, scalar_derivative, simpson_cumulative)
from .errors import BadFrame, MixedBeta, NotNull, ZeroRuling

F0 = frames.F0
F0_ORIENTED = frames.F0_ORIENTED


@dataclass
class NullFrame:
    """Sampled null frame (A, B, C) with curvature functions.

    ``F[i]`` holds A, B, C as columns at node ``s[i]``. ``k1``/``k2`` are
    the curvature functions used to build the frame (None when the frame
    came from data).
    """
    s: np.ndarray
    F: np.ndarray
    k1: Optional[Func] = None
    k2: Optional[Func] = None
    s0_index: int = 0
    _curves: dict = field(default_factory=dict, repr=False)

    @property
    def A(self) -> np.ndarray:
        return self.F[:, :, 0]

    @property
    def B(self) -> np.ndarray:
        return self.F[:, :, 1]

    @property
    def C(self) -> np.ndarray:
        return self.F[:, :, 2]

    @property
    def span(self) -> Tuple[float, float]:
        return float(self.s[0]), float(self.s[-1])

    def gram_drift(self) -> float:
        return frames.gram_drift(self.F)

    def gram_errors(self) -> np.ndarray:
        """Per-node max deviation of the six pairings."""
        return np.max(np.abs(frames.gram(self.F) - frames.GRAM0), axis=(1, 2))

    def curve(self, name: str) -> VectorCurve:
        """A, B or C as an interpolated curve with exact derivative samples."""
        if name not in self._curves:
            self._curves.update(self._build_curves())
        return self._curves[name]

    def _build_curves(self):
        A, B, C = self.A, self.B, self.C
        if self.k1 is None or self.k2 is None:
            return {"A": SampledCurve(self.s, A), "B": SampledCurve(self.s, B), "C": SampledCurve(self.s, C)}
        k1 = eval_scalar(self.k1, self.s)[:, None]
        k2 = eval_scalar(self.k2, self.s)[:, None]
        dk1 = scalar_derivative(self.k1, self.s)[:, None]
        dk2 = scalar_derivative(self.k2, self.s)[:, None]
        dA, dB, dC = k1 * C, k2 * C, -k2 * A - k1 * B
        d2A = dk1 * C + k1 * dC
        d2B = dk2 * C + k2 * dC
        d2C = -dk2 * A - k2 * dA - dk1 * B - k1 * dB
        return {
            "A": SampledCurve(self.s, A, dA, d2A),
            "B": SampledCurve(self.s, B, dB, d2B),
            "C": SampledCurve(self.s, C, dC, d2C),
        }


def integrate_frame_system(k1: Func, k2: Func, init: np.ndarray = F0, span=(-2.0, 2.0),
                           step: float = 1e-3, s0: float = 0.0) -> NullFrame:
    """RK4 solution of A' = k1 C, B' = k2 C, C' = -k2 A - k1 B."""
    s, F, i0 = frames.rk4_frame(k1, k2, init, span, step, s0)
    return NullFrame(s=s, F=F, k1=k1, k2=k2, s0_index=i0)


def frame_from_curves(A: VectorCurve, B: VectorCurve, C: VectorCurve, span, step: float = 1e-3,
                      s0: float = 0.0, tol: float = 1e-8) -> NullFrame:
    """Sample a frame given by curves, rejecting it unless it is a null
    frame with k0 = g(A', B) = 0."""
    s, i0 = frames.make_grid(span, step, s0)
    F = np.stack([A.value(s), B.value(s), C.value(s)], axis=-1)
    drift = frames.gram_drift(F)
    if drift > tol:
        raise BadFrame(f"null-frame pairings violated by {drift:.3e}")
    k0 = nil3.metric(A.d1(s), B.value(s))
    if np.max(np.abs(k0)) > tol:
        raise BadFrame(f"k0 = g(A', B) must vanish (max {np.max(np.abs(k0)):.3e})")
    return NullFrame(s=s, F=F, s0_index=i0)


class NullCurve(SampledCurve):
    """Sampled curve in Nil3 that also remembers its frame velocity A."""

    def __init__(self, s, values, d1, velocity: VectorCurve, s0_index: int, d2=None):
        super().__init__(s, values, d1, d2)
        self.velocity = velocity
        self.s0_index = s0_index


def reconstruct_curve(A, span=(-2.0, 2.0), step: float = 1e-3, s0: float = 0.0) -> NullCurve:
    """Integrate gamma^{-1} gamma' = A with gamma(s0) = 0.

    gamma1, gamma2 are plain integrals of A1, A2; gamma3 integrates
    A3 - gamma2 A1 / 2 + A2 gamma1 / 2 using the already accumulated
    gamma1, gamma2. Composite Simpson per cell with midpoint samples of A;
    gamma1, gamma2 at midpoints come from cubic Hermite interpolation.
    """
    A = as_curve(A)
    s, i0 = frames.make_grid(span, step, s0)
    mids = 0.5 * (s[:-1] + s[1:])
    An, Am = A.value(s), A.value(mids)
    g12 = simpson_cumulative(s, An[:, :2], Am[:, :2], i0)
    h = np.diff(s)[:, None]
    g12_mid = 0.5 * (g12[:-1] + g12[1:]) + h / 8.0 * (An[:-1, :2] - An[1:, :2])

    def integrand(a, g):
        return a[:, 2] - 0.5 * g[:, 1] * a[:, 0] + 0.5 * a[:, 1] * g[:, 0]

    g3 = simpson_cumulative(s, integrand(An, g12), integrand(Am, g12_mid), i0)
    gamma = np.column_stack([g12, g3])
    return NullCurve(s, gamma, nil3.from_frame(gamma, An), A, i0, base_curve_d2(gamma, An, A.d1(s)))


def base_curve_d2(gamma: np.ndarray, A: np.ndarray, dA: np.ndarray) -> np.ndarray:
    """gamma'' for gamma' = from_frame(gamma, A)."""
    out = dA.copy()
    out[:, 2] -= 0.5 * (gamma[:, 1] * dA[:, 0] - gamma[:, 0] * dA[:, 1])
    return out


class BetaFunction:
    """beta(s) of a light-cone ruling, computed pointwise from Btilde, Btilde'.

    ``residual`` is the largest least-squares residual seen during
    validation; ``speed_residual`` the largest |g(B', B') - beta^2|.
    """

    def __init__(self, Btilde: VectorCurve):
        self.Btilde = Btilde
        self.residual = 0.0
        self.speed_residual = 0.0

    def __call__(self, s) -> np.ndarray:
        return _beta_ls(self.Btilde.value(s), self.Btilde.d1(s))[0]

    def derivative(self, s, h: float = 1e-5) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return (self(s + h) - self(s - h)) / (2 * h)


def _beta_ls(B, dB):
    X = nil3.cross(B, dB)
    bb = np.sum(B * B, axis=-1)
    beta = -np.sum(B * X, axis=-1) / bb
    res = np.linalg.norm(X + beta[..., None] * B, axis=-1)
    return beta, res


def default_samples(span=(-2.0, 2.0), n: int = 401) -> np.ndarray:
    return np.linspace(span[0], span[1], n)


def compute_beta(Btilde, samples: Optional[np.ndarray] = None, tol: float = 1e-8) -> BetaFunction:
    """beta with Btilde x Btilde' = -beta Btilde, validated on ``samples``."""
    Bt = as_curve(Btilde)
    s = default_samples() if samples is None else np.asarray(samples, dtype=float)
    B, dB = Bt.value(s), Bt.d1(s)
    size = np.linalg.norm(B, axis=-1)
    if np.any(size == 0):
        raise ZeroRuling("ruling vanishes at a sample point")
    cone = np.abs(nil3.metric(B, B)) / size ** 2
    if np.max(cone) > tol:
        raise NotNull(f"ruling is not light-cone valued (|g(B,B)|/|B|^2 up to {np.max(cone):.3e})")
    beta, res = _beta_ls(B, dB)
    scale = size * np.maximum(np.linalg.norm(dB, axis=-1), 1.0)
    if np.max(res / scale) > tol:
        raise NotNull(f"Btilde x Btilde' is not parallel to Btilde (residual {np.max(res / scale):.3e})")
    out = BetaFunction(Bt)
    out.residual = float(np.max(res))
    out.speed_residual = float(np.max(np.abs(nil3.metric(dB, dB) - beta ** 2)))
    return out


@dataclass
class Ruling:
    """Light-cone valued ruling Btilde with its beta invariant and the
    induced field B = (B1, B2, -B3)."""
    Btilde: VectorCurve
    beta: BetaFunction

    @classmethod
    def from_curve(cls, Btilde, samples: Optional[np.ndarray] = None) -> "Ruling":
        Bt = as_curve(Btilde)
        return cls(Bt, compute_beta(Bt, samples))

    @property
    def induced(self) -> VectorCurve:
        from .curves import flip3
        return flip3(self.Btilde)


def normalize_ruling(ruling: Ruling, samples: Optional[np.ndarray] = None, tol: float = 1e-12) -> Ruling:
    """Rescale so that beta is identically 0 or 1/2."""
    s = default_samples() if samples is None else np.asarray(samples, dtype=float)
    b = ruling.beta(s)
    scale = max(1.0, float(np.max(np.abs(b))))
    if np.all(np.abs(b) <= tol * scale):
        return ruling
    if np.any(np.abs(b) <= tol * scale) or (np.any(b > 0) and np.any(b < 0)):
        raise MixedBeta("beta vanishes or changes sign on the span")
    if np.max(np.abs(b - b[0])) <= tol * scale:
        c = 1.0 / (2.0 * float(b[0]))
        if c == 1.0:
            return ruling
        new = ScaledCurve(ruling.Btilde, c, 0.0, 0.0)
    else:
        beta = ruling.beta
        new = ScaledCurve(ruling.Btilde, lambda u: 0.5 / beta(u),
                          lambda u: -0.5 * beta.derivative(u) / beta(u) ** 2)
    return Ruling(new, compute_beta(new, s))


def extract_curvatures(frame: NullFrame) -> Tuple[Callable, Callable, Callable]:
    """k0 = g(A', B), k1 = g(A', C), k2 = g(B', C) from grid differences.

    Derivatives come from differences of the sampled frame, independent
    of the curvature functions it was built with.
    """
    s = frame.s
    dA = grid_derivative(frame.A, s)
    dB = grid_derivative(frame.B, s)
    k0 = nil3.metric(dA, frame.B)
    k1 = nil3.metric(dA, frame.C)
    k2 = nil3.metric(dB, frame.C)
    return tuple(CubicSpline(s, k) for k in (k0, k1, k2))


def grid_derivative(values: np.ndarray, s: np.ndarray) -> np.ndarray:
    """d/ds along axis 0: fourth-order central stencil where the grid is
    locally uniform, second order elsewhere."""
    out = np.gradient(values, s, axis=0, edge_order=2)
    if len(s) < 5:
        return out
    h = np.diff(s)
    i = np.arange(2, len(s) - 2)
    loc = np.stack([h[i - 2], h[i - 1], h[i], h[i + 1]])
    ok = np.max(loc, axis=0) - np.min(loc, axis=0) <= 1e-12 * np.max(loc, axis=0)
    i = i[ok]
    hh = h[i].reshape((-1,) + (1,) * (values.ndim - 1))
    out[i] = (values[i - 2] - 8 * values[i - 1] + 8 * values[i + 1] - values[i + 2]) / (12 * hh)
    f = values
    if np.ptp(h[:4]) <= 1e-12 * h[0]:
        out[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h[0])
        out[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h[0])
    if np.ptp(h[-4:]) <= 1e-12 * h[-1]:
        out[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h[-1])
        out[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h[-1])
    return out
