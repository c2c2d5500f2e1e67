"""Finite-difference surface geometry in Nil3 or Minkowski space.

Given a map F(u, v) -> R^3 (coordinates), central differences give the
first and second coordinate derivatives; these are pushed to frame
components and combined with the connection table to get covariant
derivatives, the normal and the second fundamental form. Nothing here
uses closed-form scroll data.

Normal convention: N = -sgn(F) n/|n| with n = X_u x X_v and F = g(X_u, X_v).
For null coordinates this is -X_x x X_y/|X_x x X_y|; for a null scroll
in (s, t) it is -f_s x f_t / g12.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import nil3
from .paracomplex import ParaComplex

FD_STEP1 = 1e-5
FD_STEP2 = 1e-4


@dataclass
class SurfaceGeometry:
    point: np.ndarray
    Xu: np.ndarray
    Xv: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    normal: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N: np.ndarray
    H: np.ndarray
    det: np.ndarray

    def hopf(self) -> ParaComplex:
        """l g(nabla_u X_u, N) + lbar g(nabla_v X_v, N); meaningful in null coordinates."""
        return ParaComplex.from_null(self.L, self.N)

    def conformal_factor(self) -> np.ndarray:
        """u with e^u = 2 g(X_u, X_v); NaN where that is not positive."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(self.F > 0, np.log(np.where(self.F > 0, 2 * self.F, 1.0)), np.nan)


def coordinate_jets(Fmap: Callable, u, v, h1: float = FD_STEP1, h2: float = FD_STEP2):
    """P, P_u, P_v, P_uu, P_uv, P_vv by central differences."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    P = np.asarray(Fmap(u, v), dtype=float)
    Pu = (Fmap(u + h1, v) - Fmap(u - h1, v)) / (2 * h1)
    Pv = (Fmap(u, v + h1) - Fmap(u, v - h1)) / (2 * h1)
    Puu = (Fmap(u + h2, v) - 2 * P + Fmap(u - h2, v)) / (h2 * h2)
    Pvv = (Fmap(u, v + h2) - 2 * P + Fmap(u, v - h2)) / (h2 * h2)
    Puv = (Fmap(u + h2, v + h2) - Fmap(u + h2, v - h2) - Fmap(u - h2, v + h2)
           + Fmap(u - h2, v - h2)) / (4 * h2 * h2)
    return P, Pu, Pv, Puu, Puv, Pvv


def _metric(ambient):
    if ambient == "nil":
        return nil3.metric
    return lambda a, b: -a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1] + a[..., 2] * b[..., 2]


def assemble(P, Xu, Xv, Duu, Duv, Dvv, ambient: str = "nil") -> SurfaceGeometry:
    """Geometry from tangent vectors and covariant second derivatives."""
    g = _metric(ambient)
    E, F, G = g(Xu, Xu), g(Xu, Xv), g(Xv, Xv)
    n = nil3.cross(Xu, Xv)
    with np.errstate(invalid="ignore", divide="ignore"):
        nn = np.sqrt(np.abs(g(n, n)))
        normal = -np.sign(F)[..., None] * n / nn[..., None]
        L, M, Nn = g(Duu, normal), g(Duv, normal), g(Dvv, normal)
        det = E * G - F * F
        H = 0.5 * (G * L - 2 * F * M + E * Nn) / det
    return SurfaceGeometry(P, Xu, Xv, E, F, G, normal, L, M, Nn, H, det)


def surface_geometry(Fmap: Callable, u, v, h1: float = FD_STEP1, h2: float = FD_STEP2,
                     ambient: str = "nil") -> SurfaceGeometry:
    """Full FD geometry of a coordinate map into Nil3 (or Minkowski space)."""
    P, Pu, Pv, Puu, Puv, Pvv = coordinate_jets(Fmap, u, v, h1, h2)
    if ambient == "nil":
        Xu, Xv = nil3.to_frame(P, Pu), nil3.to_frame(P, Pv)
        dXu_u = nil3.frame_derivative_of_coordinate_field(P, Pu, Pu, Puu)
        dXv_u = nil3.frame_derivative_of_coordinate_field(P, Pv, Pu, Puv)
        dXv_v = nil3.frame_derivative_of_coordinate_field(P, Pv, Pv, Pvv)
        Duu = dXu_u + nil3.connection(Xu, Xu)
        Duv = dXv_u + nil3.connection(Xu, Xv)
        Dvv = dXv_v + nil3.connection(Xv, Xv)
    else:
        Xu, Xv, Duu, Duv, Dvv = Pu, Pv, Puu, Puv, Pvv
    return assemble(P, Xu, Xv, Duu, Duv, Dvv, ambient)


def frame_field_geometry(partials: Callable, u, v, h: float = FD_STEP1,
                         point: Optional[np.ndarray] = None) -> SurfaceGeometry:
    """Nil3 geometry from frame components of the partial derivatives.

    ``partials(u, v) -> (X_u, X_v)`` in frame components. Covariant
    derivatives need only the frame-component derivatives, so no
    positions are required.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    Xu, Xv = partials(u, v)
    Xu_p, Xv_p = partials(u + h, v)
    Xu_m, Xv_m = partials(u - h, v)
    _, Xv_vp = partials(u, v + h)
    _, Xv_vm = partials(u, v - h)
    Duu = (Xu_p - Xu_m) / (2 * h) + nil3.connection(Xu, Xu)
    Duv = (Xv_p - Xv_m) / (2 * h) + nil3.connection(Xu, Xv)
    Dvv = (Xv_vp - Xv_vm) / (2 * h) + nil3.connection(Xv, Xv)
    P = np.full(np.shape(Xu), np.nan) if point is None else point
    return assemble(P, Xu, Xv, Duu, Duv, Dvv, "nil")
