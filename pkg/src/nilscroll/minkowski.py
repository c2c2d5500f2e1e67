"""Minkowski 3-space with signature (-, +, +): null Frenet frames,
B-scrolls, Lorentz-group membership and FD surface data."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import fdgeom, frames
from .curves import Func, SampledCurve, VectorCurve, simpson_cumulative
from .errors import DegenerateMetric, ValidationError
from .nullcurve import NullFrame
from .paracomplex import ParaComplex

ETA = frames.ETA
F0 = frames.F0


def mink_inner(v, w) -> np.ndarray:
    v, w = np.asarray(v, dtype=float), np.asarray(w, dtype=float)
    return -v[..., 0] * w[..., 0] + v[..., 1] * w[..., 1] + v[..., 2] * w[..., 2]


def mink_cross(v, w) -> np.ndarray:
    """<mink_cross(v, w), z> = det[v | w | z]."""
    from .nil3 import cross
    return cross(v, w)


@dataclass
class MinkNullFrame(NullFrame):
    """Null Frenet frame in Minkowski space together with its base curve."""
    gamma: Optional[SampledCurve] = None


def integrate_mink_frame(k1: Func, k2: Func, init: np.ndarray = F0, span=(-2.0, 2.0), step: float = 1e-3,
                         s0: float = 0.0) -> MinkNullFrame:
    """RK4 null Frenet frame; gamma = integral of A with gamma(s0) = 0."""
    s, F, i0 = frames.rk4_frame(k1, k2, init, span, step, s0)
    fr = MinkNullFrame(s=s, F=F, k1=k1, k2=k2, s0_index=i0)
    Acurve = fr.curve("A")
    mids = 0.5 * (s[:-1] + s[1:])
    g = simpson_cumulative(s, fr.A, Acurve.value(mids), i0)
    fr.gamma = SampledCurve(s, g, fr.A, Acurve.d1(s))
    return fr


def bscroll_eval(gamma, B, s, t) -> np.ndarray:
    """Phi(s, t) = gamma(s) + t B(s)."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    g = gamma.value(s) if isinstance(gamma, VectorCurve) else np.asarray(gamma(s), dtype=float)
    b = B.value(s) if isinstance(B, VectorCurve) else np.asarray(B(s), dtype=float)
    return g + t[..., None] * b


@dataclass
class BScroll:
    frame: MinkNullFrame

    def __call__(self, s, t):
        return bscroll_eval(self.frame.gamma, self.frame.curve("B"), s, t)

    def partials(self, s, t):
        """(Phi_s, Phi_t) = (A + t B', B)."""
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        B = self.frame.curve("B")
        return self.frame.curve("A").value(s) + t[..., None] * B.d1(s), B.value(s)


@dataclass
class MinkSurfaceData:
    """FD geometry of a Minkowski surface on a grid.

    ``u`` and ``Q`` are defined only when the parameters are null
    coordinates; the Gauss-Codazzi residuals are then filled in on
    interior nodes.
    """
    H: np.ndarray
    normal: np.ndarray
    det: np.ndarray
    u: Optional[np.ndarray] = None
    Q: Optional[ParaComplex] = None
    gauss_residual: Optional[np.ndarray] = None
    codazzi_residual: Optional[np.ndarray] = None


def surface_data(Phi, u_values, v_values, null_chart: bool = False, h1: float = fdgeom.FD_STEP1,
                 h2: float = fdgeom.FD_STEP2, tol: float = 1e-12) -> MinkSurfaceData:
    """FD normal, mean curvature and (in null coordinates) u, Q and
    Gauss-Codazzi residuals on the grid u_values x v_values."""
    U, V = np.meshgrid(np.asarray(u_values, dtype=float), np.asarray(v_values, dtype=float), indexing="ij")
    geo = fdgeom.surface_geometry(Phi, U, V, h1, h2, ambient="mink")
    if np.any(np.abs(geo.det) <= tol):
        raise DegenerateMetric("induced metric is degenerate at a sample point")
    out = MinkSurfaceData(geo.H, geo.normal, geo.det)
    if not null_chart:
        return out
    if np.any(geo.F <= 0):
        raise DegenerateMetric("null chart needs <Phi_x, Phi_y> > 0")
    u = np.log(2 * geo.F)
    a, b = geo.L, geo.N
    out.u, out.Q = u, ParaComplex.from_null(a, b)
    xs, ys = U[:, 0], V[0, :]
    if len(xs) >= 3 and len(ys) >= 3:
        u_x = np.gradient(u, xs, axis=0)
        u_xy = np.gradient(u_x, ys, axis=1)
        eu = np.exp(u)
        gauss = 0.5 * u_xy + 0.25 * geo.H ** 2 * eu - a * b / eu
        a_y = np.gradient(a, ys, axis=1)
        b_x = np.gradient(b, xs, axis=0)
        H_x = np.gradient(geo.H, xs, axis=0)
        H_y = np.gradient(geo.H, ys, axis=1)
        codazzi = np.maximum(np.abs(a_y - 0.5 * H_x * eu), np.abs(b_x - 0.5 * H_y * eu))
        out.gauss_residual = np.abs(gauss)[1:-1, 1:-1]
        out.codazzi_residual = codazzi[1:-1, 1:-1]
    return out


def is_lorentz(M, tol: float = 1e-10) -> bool:
    M = np.asarray(M, dtype=float)
    if M.shape != (3, 3):
        return False
    return bool(np.max(np.abs(M.T @ ETA @ M - ETA)) <= tol)


def is_special_lorentz(M, tol: float = 1e-10) -> bool:
    return is_lorentz(M, tol) and abs(np.linalg.det(np.asarray(M, dtype=float)) - 1.0) <= tol


def boost(rapidity: float, axis: int = 1) -> np.ndarray:
    """Boost mixing the timelike axis 0 with spatial axis 1 or 2."""
    if axis not in (1, 2):
        raise ValidationError("boost axis must be 1 or 2")
    M = np.eye(3)
    c, s = np.cosh(rapidity), np.sinh(rapidity)
    M[0, 0] = M[axis, axis] = c
    M[0, axis] = M[axis, 0] = s
    return M


def rotation(angle: float) -> np.ndarray:
    """Rotation of the spacelike (1, 2) plane."""
    M = np.eye(3)
    c, s = np.cos(angle), np.sin(angle)
    M[1, 1], M[1, 2], M[2, 1], M[2, 2] = c, -s, s, c
    return M


def random_so21(rng: np.random.Generator, max_rapidity: float = 1.0) -> np.ndarray:
    """Rotation * boost * rotation with random parameters; always in SO(2,1)
    and in the identity component."""
    a, b = rng.uniform(0, 2 * np.pi, size=2)
    r = rng.uniform(-max_rapidity, max_rapidity)
    return rotation(a) @ boost(r) @ rotation(b)


def matrix_from_json(values) -> np.ndarray:
    """Parse a row-major list of 9 numbers."""
    arr = np.asarray(values, dtype=float)
    if arr.shape != (9,):
        raise ValidationError("SO(2,1) matrix must be a list of 9 numbers (row-major)")
    return arr.reshape(3, 3)
