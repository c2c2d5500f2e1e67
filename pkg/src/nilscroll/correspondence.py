"""Dictionary between Nil3 minimal null scrolls and Minkowski B-scrolls.

Derivatives in a null chart are carried as frame components (a, b) of
(f_x, f_y); the para-complex triple is phi^j = a_j l + b_j lbar. The
associated Minkowski derivative (phi^1, phi^2, i' phi^3) has
Phi_x = (a1, a2, a3) and Phi_y = (b1, b2, -b3).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from . import fdgeom, nil3
from .curves import SampledCurve, eval_scalar, flip3, simpson_cumulative
from .errors import BadFrame, NotClosed, NotLorentz
from .minkowski import BScroll, MinkNullFrame, is_special_lorentz
from .nullcurve import NullFrame, Ruling, base_curve_d2, compute_beta
from .paracomplex import ParaComplex
from .scroll import NullChart, NullScroll, abresch_rosenberg_definitional, scroll_partials

FLIP = np.array([1.0, 1.0, -1.0])
Partials = Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, np.ndarray]]


def bscroll_chart() -> NullChart:
    """s = x, t = 1/(x/8 + 1/y)."""
    return NullChart(lambda x: np.asarray(x, dtype=float) / 8.0, lambda y: 1.0 / np.asarray(y, dtype=float),
                     px=lambda x: np.full(np.shape(x), 0.125), qy=lambda y: -1.0 / np.asarray(y, dtype=float) ** 2)


def lift_correction(frame: MinkNullFrame) -> np.ndarray:
    """Node values of integral_0^s (-gamma2 A1 / 2 + gamma1 A2 / 2) ds."""
    s = frame.s
    mids = 0.5 * (s[:-1] + s[1:])
    g, A = frame.gamma, frame.curve("A")

    def integrand(gv, av):
        return -0.5 * gv[..., 1] * av[..., 0] + 0.5 * gv[..., 0] * av[..., 1]

    return simpson_cumulative(s, integrand(g.value(s), A.value(s)), integrand(g.value(mids), A.value(mids)),
                              frame.s0_index)


def bscroll_to_nil(frame: MinkNullFrame, tol: float = 1e-12) -> NullScroll:
    """Lift a k2 = 1/2 B-scroll to the minimal null scroll
    gamma~(s) . exp(t (B1, B2, -B3)) with
    gamma~ = (gamma1, gamma2, gamma3 + integral(-gamma2 A1/2 + gamma1 A2/2))."""
    if frame.gamma is None or frame.k2 is None:
        raise BadFrame("need a Minkowski frame with its base curve and curvatures")
    if np.max(np.abs(eval_scalar(frame.k2, frame.s) - 0.5)) > tol:
        raise BadFrame("second curvature must be 1/2")
    if np.linalg.det(frame.F[frame.s0_index]) <= 0:
        raise BadFrame("frame must satisfy C = A x B")
    if np.max(np.abs(frame.gamma.value(frame.s[frame.s0_index]))) > tol:
        raise BadFrame("base curve must pass through the origin at s0")
    s = frame.s
    A = frame.curve("A")
    gamma = frame.gamma.value(s).copy()
    gamma[:, 2] += lift_correction(frame)
    nil_gamma = SampledCurve(s, gamma, nil3.from_frame(gamma, frame.A), base_curve_d2(gamma, frame.A, A.d1(s)))
    Bt = flip3(frame.curve("B"))
    nil_frame = NullFrame(s=s, F=frame.F, k1=frame.k1, k2=frame.k2, s0_index=frame.s0_index)
    beta = compute_beta(Bt, np.linspace(s[0], s[-1], 401))
    lo, hi = frame.span
    return NullScroll(nil_gamma, A, Ruling(Bt, beta), name="lifted-bscroll", frame=nil_frame,
                      domain=((max(lo, -1.0), min(hi, 1.0)), (-1.0, 1.0)), meta={"mink_frame": frame})


@dataclass
class DerivativeTriple:
    """Frame components of (f_x, f_y) in a null chart."""
    partials: Partials
    chart: Optional[NullChart] = None

    def __call__(self, x, y):
        return self.partials(np.asarray(x, dtype=float), np.asarray(y, dtype=float))

    def phi(self, x, y) -> Tuple[ParaComplex, ParaComplex, ParaComplex]:
        a, b = self(x, y)
        return tuple(ParaComplex.from_null(a[..., j], b[..., j]) for j in range(3))


def derivative_of(f, chart: NullChart, method: str = "fd", h: float = fdgeom.FD_STEP1) -> DerivativeTriple:
    """f_z = sum phi^j E_j in the chart.

    ``method="fd"`` differentiates f(s(x), t(x, y)) by central
    differences; ``method="closed"`` uses the closed-form scroll partials
    and the chain rule.
    """
    if method == "closed":
        def partials(x, y):
            x, y = np.broadcast_arrays(x, y)
            chart.check(x, y)
            s, t = chart.st(x, y)
            sx, tx, ty = chart.derivatives(x, y)
            fs, ft = scroll_partials(f, s, t)
            return sx[..., None] * fs + tx[..., None] * ft, ty[..., None] * ft
    else:
        F = chart.compose(f) if chart is not None else f

        def partials(x, y):
            x, y = np.broadcast_arrays(x, y)
            if chart is not None:
                chart.check(x, y)
            P = F(x, y)
            Px = (F(x + h, y) - F(x - h, y)) / (2 * h)
            Py = (F(x, y + h) - F(x, y - h)) / (2 * h)
            return nil3.to_frame(P, Px), nil3.to_frame(P, Py)
    return DerivativeTriple(partials, chart)


@dataclass
class MinkDerivative:
    partials: Partials

    def __call__(self, x, y):
        return self.partials(np.asarray(x, dtype=float), np.asarray(y, dtype=float))


def to_mink(d: DerivativeTriple) -> MinkDerivative:
    """(phi^1, phi^2, i' phi^3): Phi_x = a, Phi_y = b with the third entry negated."""
    def partials(x, y):
        a, b = d(x, y)
        return a, b * FLIP
    return MinkDerivative(partials)


def from_mink(m: MinkDerivative, chart: Optional[NullChart] = None) -> DerivativeTriple:
    def partials(x, y):
        a, b = m(x, y)
        return a, b * FLIP
    return DerivativeTriple(partials, chart)


def mink_partials_in_chart(scroll: BScroll, chart: NullChart) -> MinkDerivative:
    """(Phi_x, Phi_y) of a B-scroll in a null chart via the chain rule."""
    def partials(x, y):
        x, y = np.broadcast_arrays(x, y)
        s, t = chart.st(x, y)
        sx, tx, ty = chart.derivatives(x, y)
        Ps, Pt = scroll.partials(s, t)
        return sx[..., None] * Ps + tx[..., None] * Pt, ty[..., None] * Pt
    return MinkDerivative(partials)


def closedness_residual(d: DerivativeTriple, x, y, h: float = fdgeom.FD_STEP1) -> np.ndarray:
    """Max over components of the exterior derivative of the 1-form
    (a_i dx + b_i dy, i = 1, 2; a3 dx + b3 dy - (F2 da1 - F1 da2)/2).

    Position-free form: d_y a_i - d_x b_i for i = 1, 2 and
    d_y a3 - d_x b3 + b1 a2 - a1 b2 for the third component.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    a, b = d(x, y)
    a_yp, _ = d(x, y + h)
    a_ym, _ = d(x, y - h)
    _, b_xp = d(x + h, y)
    _, b_xm = d(x - h, y)
    ay = (a_yp - a_ym) / (2 * h)
    bx = (b_xp - b_xm) / (2 * h)
    r = ay - bx
    r3 = r[..., 2] + b[..., 0] * a[..., 1] - a[..., 0] * b[..., 1]
    return np.maximum(np.max(np.abs(r[..., :2]), axis=-1), np.abs(r3))


@dataclass
class GridSurface:
    """Surface sampled on a rectangular (x, y) grid."""
    xs: np.ndarray
    ys: np.ndarray
    points: np.ndarray
    path_gap: float
    closedness: float
    meta: dict = field(default_factory=dict)


def _edge(F: np.ndarray, vel: Callable[[float], np.ndarray], s0: float, s1: float, n_sub: int) -> np.ndarray:
    """Integrate dF/ds = from_frame(F, vel(s)) from s0 to s1.

    RK4 with the integrand sampled at the ends and midpoint of each
    substep: the first two coordinates get Simpson's rule exactly and the
    third uses the accumulated first two (explicit coupling)."""
    h = (s1 - s0) / n_sub
    s = s0
    for _ in range(n_sub):
        va, vm, vb = vel(s), vel(s + h / 2), vel(s + h)
        k1 = nil3.from_frame(F, va)
        k2 = nil3.from_frame(F + h / 2 * k1, vm)
        k3 = nil3.from_frame(F + h / 2 * k2, vm)
        k4 = nil3.from_frame(F + h * k3, vb)
        F = F + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        s += h
    return F


def _x_first(d, xs, ys, base, n_sub):
    nx, ny = len(xs), len(ys)
    out = np.empty((nx, ny, 3))
    row = np.empty((nx, 3))
    row[0] = base
    y0 = ys[0]
    for i in range(nx - 1):
        row[i + 1] = _edge(row[i], lambda u: d(np.asarray(u), np.asarray(y0))[0], xs[i], xs[i + 1], n_sub)
    out[:, 0] = row
    for j in range(ny - 1):
        out[:, j + 1] = _edge(out[:, j], lambda v: d(xs, np.full(nx, v))[1], ys[j], ys[j + 1], n_sub)
    return out


def _y_first(d, xs, ys, base, n_sub):
    nx, ny = len(xs), len(ys)
    out = np.empty((nx, ny, 3))
    col = np.empty((ny, 3))
    col[0] = base
    x0 = xs[0]
    for j in range(ny - 1):
        col[j + 1] = _edge(col[j], lambda v: d(np.asarray(x0), np.asarray(v))[1], ys[j], ys[j + 1], n_sub)
    out[0] = col
    for i in range(nx - 1):
        out[i + 1] = _edge(out[i], lambda u: d(np.full(ny, u), ys)[0], xs[i], xs[i + 1], n_sub)
    return out


def integrate_from_derivative(d: DerivativeTriple, xs, ys, basepoint=(0.0, 0.0, 0.0), n_sub: int = 4,
                              closed_tol: float = 1e-8, path_tol: float = 1e-7) -> GridSurface:
    """Reconstruct f on the grid xs x ys from its frame derivatives.

    The basepoint is placed at (xs[0], ys[0]). Closedness is checked on
    the grid first, then the x-first and y-first staircase integrations
    must agree.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    closed = float(np.max(closedness_residual(d, X, Y)))
    if closed > closed_tol:
        raise NotClosed(f"derivative 1-form is not closed (residual {closed:.3e})")
    base = np.asarray(basepoint, dtype=float)
    p1 = _x_first(d, xs, ys, base, n_sub)
    p2 = _y_first(d, xs, ys, base, n_sub)
    gap = float(np.max(np.abs(p1 - p2)))
    if gap > path_tol:
        raise NotClosed(f"integration paths disagree by {gap:.3e}")
    return GridSurface(xs, ys, 0.5 * (p1 + p2), gap, closed)


@dataclass
class GaugedSurface:
    """Result of an SO(2,1) gauge transformation of a minimal scroll."""
    derivative: DerivativeTriple
    original: DerivativeTriple
    matrix: np.ndarray
    surface: Optional[GridSurface] = None

    def geometry(self, x, y, h: float = fdgeom.FD_STEP1) -> fdgeom.SurfaceGeometry:
        return fdgeom.frame_field_geometry(self.derivative.partials, x, y, h)

    def original_geometry(self, x, y, h: float = fdgeom.FD_STEP1) -> fdgeom.SurfaceGeometry:
        return fdgeom.frame_field_geometry(self.original.partials, x, y, h)


def support_from_geometry(geo: fdgeom.SurfaceGeometry) -> np.ndarray:
    """-e^{u/2} g(N, E3) with e^u = 2 g(f_x, f_y)."""
    with np.errstate(invalid="ignore"):
        return -np.sqrt(2 * geo.F) * geo.normal[..., 2]


def ar_from_geometry(geo: fdgeom.SurfaceGeometry) -> ParaComplex:
    return abresch_rosenberg_definitional(geo, geo.H)


def gauge_transform(f: NullScroll, chart: NullChart, M, xs=None, ys=None, basepoint=(0.0, 0.0, 0.0)) -> GaugedSurface:
    """Apply (phi^1, phi^2, i' phi^3) -> (phi^1, phi^2, i' phi^3) M and reintegrate.

    The derivative is taken in closed form; when grid axes are given the
    transformed surface is also reconstructed by path integration."""
    M = np.asarray(M, dtype=float)
    if not is_special_lorentz(M):
        raise NotLorentz("gauge matrix must lie in SO(2,1)")
    d_old = derivative_of(f, chart, method="closed")
    mink = to_mink(d_old)

    def partials(x, y):
        a, b = mink(x, y)
        return a @ M, (b @ M) * FLIP

    d_new = DerivativeTriple(partials, chart)
    out = GaugedSurface(d_new, d_old, M)
    if xs is not None and ys is not None:
        out.surface = integrate_from_derivative(d_new, xs, ys, basepoint)
    return out


def gauge_residuals(g: GaugedSurface, x, y, mask_tol: float = 1e-2, h: float = fdgeom.FD_STEP1) -> dict:
    """Max |H|, ||h| - |h_0|| and |Q - Q_0| over points where the new
    metric coefficient g(f_x, f_y) is at least ``mask_tol``.

    A gauge change can push g(f_x, f_y) towards zero (branch points of the
    new surface); finite differences are meaningless there.
    """
    new, old = g.geometry(x, y, h), g.original_geometry(x, y, h)
    m = np.isfinite(new.F) & (new.F >= mask_tol)
    h1, h0 = support_from_geometry(new), support_from_geometry(old)
    q = ar_from_geometry(new) - ar_from_geometry(old)
    out = {"maskFraction": float(1.0 - m.mean())}
    if not m.any():
        return {**out, "H": float("nan"), "support": float("nan"), "ar": float("nan")}
    out["H"] = float(np.max(np.abs(new.H[m])))
    out["support"] = float(np.max(np.abs(np.abs(h1[m]) - np.abs(h0[m]))))
    out["ar"] = float(np.max(np.maximum(np.abs(q.lpart[m]), np.abs(q.lbarpart[m]))))
    return out
