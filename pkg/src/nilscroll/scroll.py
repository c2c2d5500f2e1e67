"""Null scrolls f(s, t) = gamma(s) . exp(t Btilde(s)) in Nil3.

Closed-form first and second fundamental forms, mean curvature,
minimality classification, null charts, support function,
Abresch-Rosenberg differential and Liouville residuals.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from . import fdgeom, nil3
from .curves import Func, VectorCurve, eval_scalar, scalar_derivative
from .errors import ChartInvalid, DegeneratePoint, OutOfGrid
from .nullcurve import NullFrame, Ruling
from .paracomplex import ParaComplex

Domain = Tuple[Tuple[float, float], Tuple[float, float]]


@dataclass
class NullScroll:
    """Null scroll over a null curve.

    ``gamma`` is the base curve in coordinates, ``A`` its frame velocity
    gamma^{-1} gamma' (with derivative), ``ruling`` the light-cone valued
    Btilde. ``domain`` is the default working grid; ``frame`` is present
    when the scroll came from a null frame with known curvatures.
    """
    gamma: VectorCurve
    A: VectorCurve
    ruling: Ruling
    name: str = "scroll"
    domain: Domain = ((-1.0, 1.0), (-1.0, 1.0))
    frame: Optional[NullFrame] = None
    chart: Optional["NullChart"] = None
    meta: dict = field(default_factory=dict)

    @property
    def Btilde(self) -> VectorCurve:
        return self.ruling.Btilde

    def eval(self, s, t) -> np.ndarray:
        return evaluate(self, s, t)

    def __call__(self, s, t) -> np.ndarray:
        return evaluate(self, s, t)

    @property
    def k1(self) -> Optional[Func]:
        return None if self.frame is None else self.frame.k1


def evaluate(f: NullScroll, s, t) -> np.ndarray:
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    return nil3.group_mul(f.gamma.value(s), nil3.lie_exp(t[..., None] * f.Btilde.value(s)))


def _parts(f: NullScroll, s, t):
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    return s, t, f.A.value(s), f.Btilde.value(s), f.Btilde.d1(s)


def _d3(A, B, dB, t):
    x = A[..., 0] * B[..., 1] - A[..., 1] * B[..., 0]
    w = B[..., 1] * dB[..., 0] - B[..., 0] * dB[..., 1]
    return A[..., 2] + t * (dB[..., 2] + x) + 0.5 * t * t * w


def scroll_partials(f: NullScroll, s, t) -> Tuple[np.ndarray, np.ndarray]:
    """(f_s, f_t) in frame components."""
    s, t, A, B, dB = _parts(f, s, t)
    fs = np.stack([A[..., 0] + t * dB[..., 0], A[..., 1] + t * dB[..., 1], _d3(A, B, dB, t)], axis=-1)
    return fs, B


def _ds_fs(f: NullScroll, s, t):
    """s-derivative of the frame components of f_s."""
    s, t, A, B, dB = _parts(f, s, t)
    dA, d2B = f.A.d1(s), f.Btilde.d2(s)
    x = dA[..., 0] * B[..., 1] + A[..., 0] * dB[..., 1] - dA[..., 1] * B[..., 0] - A[..., 1] * dB[..., 0]
    w = B[..., 1] * d2B[..., 0] - B[..., 0] * d2B[..., 1]
    d3 = dA[..., 2] + t * (d2B[..., 2] + x) + 0.5 * t * t * w
    return np.stack([dA[..., 0] + t * d2B[..., 0], dA[..., 1] + t * d2B[..., 1], d3], axis=-1)


def g11_polynomial(f: NullScroll, s, t) -> np.ndarray:
    s, t, A, B, dB = _parts(f, s, t)
    x = A[..., 0] * B[..., 1] - A[..., 1] * B[..., 0]
    w = B[..., 1] * dB[..., 0] - B[..., 0] * dB[..., 1]
    c1 = 2 * nil3.metric(A, dB) + 2 * x * A[..., 2]
    c2 = nil3.metric(dB, dB) + 2 * x * dB[..., 2] + x * x + w * A[..., 2]
    c3 = w * (dB[..., 2] + x)
    c4 = 0.25 * w * w
    return t * c1 + t ** 2 * c2 + t ** 3 * c3 + t ** 4 * c4


def g12_polynomial(f: NullScroll, s, t) -> np.ndarray:
    s, t, A, B, dB = _parts(f, s, t)
    x = A[..., 0] * B[..., 1] - A[..., 1] * B[..., 0]
    w = B[..., 1] * dB[..., 0] - B[..., 0] * dB[..., 1]
    return nil3.metric(A, B) + t * x * B[..., 2] + 0.5 * t * t * w * B[..., 2]


def h12_block_coefficients(f: NullScroll, s, linear_w: bool = False) -> np.ndarray:
    """Coefficients c0..c4 of g(nabla_s f_t, f_s x f_t) as a polynomial in t.

    The default is the direct expansion, with t^4 coefficient -w^2 B3^2 / 8.
    ``linear_w=True`` swaps in the variant -w B3^2 / 8, which disagrees with
    the expansion and is kept only so the discrepancy can be demonstrated.
    """
    s = np.asarray(s, dtype=float)
    A, B, dB = f.A.value(s), f.Btilde.value(s), f.Btilde.d1(s)
    Bi = B * np.array([1.0, 1.0, -1.0])
    x = A[..., 0] * B[..., 1] - A[..., 1] * B[..., 0]
    w = B[..., 1] * dB[..., 0] - B[..., 0] * dB[..., 1]
    b3, db3, a3 = B[..., 2], dB[..., 2], A[..., 2]
    gAB = nil3.metric(A, B)
    c0 = nil3.metric(A, nil3.cross(B, dB)) + 0.5 * gAB * nil3.metric(A, Bi)
    c1 = -x * (a3 * b3 ** 2 + w) + 0.5 * gAB * (-B[..., 0] * dB[..., 0] + B[..., 1] * dB[..., 1] - b3 * db3)
    c2 = -0.5 * w * (a3 * b3 ** 2 + w) - x * db3 * b3 ** 2 - 0.5 * x * x * b3 ** 2
    c3 = -0.5 * x * w * b3 ** 2 - 0.5 * w * db3 * b3 ** 2
    if linear_w:
        c4 = -0.125 * w * b3 ** 2
    else:
        c4 = -0.125 * w * w * b3 ** 2
    return np.stack([c0, c1, c2, c3, c4], axis=-1)


def h12_block(f: NullScroll, s, t, linear_w: bool = False) -> np.ndarray:
    c = h12_block_coefficients(f, s, linear_w)
    t = np.asarray(t, dtype=float)
    return sum(c[..., k] * t ** k for k in range(5))


@dataclass
class FundamentalData:
    g11: np.ndarray
    g12: np.ndarray
    g22: np.ndarray
    h11: np.ndarray
    h12: np.ndarray
    h22: np.ndarray
    H: np.ndarray
    N: np.ndarray
    D3: np.ndarray
    u: Optional[np.ndarray] = None


def fundamental_data(f: NullScroll, s, t, strict: bool = True) -> FundamentalData:
    """Closed-form fundamental data at (s, t).

    g11, g12 come from the t-polynomials; h_ij from covariant
    derivatives of the closed-form partials with N = -f_s x f_t / g12.
    With ``strict`` a point with g12 = 0 raises DegeneratePoint;
    otherwise such points give NaN/inf and callers mask them.
    """
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    fs, ft = scroll_partials(f, s, t)
    g11 = g11_polynomial(f, s, t)
    g12 = g12_polynomial(f, s, t)
    if strict and np.any(g12 == 0):
        raise DegeneratePoint("g12 vanishes: first fundamental form is degenerate")
    dB = f.Btilde.d1(s)
    nss = _ds_fs(f, s, t) + nil3.connection(fs, fs)
    nst = dB + nil3.connection(fs, ft)
    ntt = nil3.connection(ft, ft)
    with np.errstate(divide="ignore", invalid="ignore"):
        N = -nil3.cross(fs, ft) / g12[..., None]
        h11, h12, h22 = nil3.metric(nss, N), nil3.metric(nst, N), nil3.metric(ntt, N)
        H = -(g11 * h22 - 2 * g12 * h12) / (2 * g12 ** 2)
    return FundamentalData(g11, g12, np.zeros_like(g11), h11, h12, h22, H, N, fs[..., 2])


def mean_curvature(f: NullScroll, s, t, strict: bool = False) -> np.ndarray:
    return fundamental_data(f, s, t, strict=strict).H


def nabla_t_ft(B) -> np.ndarray:
    """-B2 B3 E1 - B1 B3 E2."""
    B = np.asarray(B, dtype=float)
    return np.stack([-B[..., 1] * B[..., 2], -B[..., 0] * B[..., 2], np.zeros(B.shape[:-1])], axis=-1)


class MinimalityClass(str, enum.Enum):
    INNER_ZERO = "InnerZero"
    TWO_BETA = "TwoBeta"
    NOT_MINIMAL = "NotMinimal"


def minimality_invariants(f: NullScroll, s) -> Tuple[np.ndarray, np.ndarray]:
    """(g(A, Btilde), g(A, B) - 2 beta) at parameters s."""
    s = np.asarray(s, dtype=float)
    A = f.A.value(s)
    Bt = f.Btilde.value(s)
    Bi = Bt * np.array([1.0, 1.0, -1.0])
    return nil3.metric(A, Bt), nil3.metric(A, Bi) - 2 * f.ruling.beta(s)


def minimality_class(f: NullScroll, samples: Optional[np.ndarray] = None, tol: float = 1e-9) -> MinimalityClass:
    """Classify by the two algebraic minimality conditions on ``samples``."""
    if samples is None:
        samples = np.linspace(*f.domain[0], 101)
    inner, two_beta = minimality_invariants(f, samples)
    if np.all(np.abs(two_beta) <= tol):
        return MinimalityClass.TWO_BETA
    if np.all(np.abs(inner) <= tol):
        return MinimalityClass.INNER_ZERO
    return MinimalityClass.NOT_MINIMAL


def normal_e3(f: NullScroll, s, t) -> np.ndarray:
    """g(N, E3); identically zero exactly for vertical (Hopf cylinder) scrolls."""
    return fundamental_data(f, s, t, strict=False).N[..., 2]


def is_hopf_cylinder(f: NullScroll, s, t, tol: float = 1e-10) -> bool:
    v = normal_e3(f, s, t)
    v = v[np.isfinite(v)]
    return bool(v.size) and bool(np.max(np.abs(v)) <= tol)


# ---------------------------------------------------------------- charts

def _fd(fn, x, h=1e-5):
    return (eval_scalar(fn, x + h) - eval_scalar(fn, x - h)) / (2 * h)


@dataclass
class NullChart:
    """Null coordinates (x, y) with s = 8 p(x), t = 1/(p(x) + q(y)).

    Derivatives of p, q may be supplied; otherwise central differences
    are used. S, T are the optional components of Q = l S + lbar T.
    """
    p: Func
    q: Func
    px: Optional[Func] = None
    qy: Optional[Func] = None
    S: Optional[Func] = None
    T: Optional[Func] = None
    x_range: Optional[Tuple[float, float]] = None
    y_range: Optional[Tuple[float, float]] = None

    def _px(self, x):
        return eval_scalar(self.px, x) if self.px is not None else scalar_derivative(self.p, x)

    def _qy(self, y):
        return eval_scalar(self.qy, y) if self.qy is not None else scalar_derivative(self.q, y)

    def check(self, x, y) -> None:
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        pq = eval_scalar(self.p, x) + eval_scalar(self.q, y)
        if np.any(pq == 0):
            raise ChartInvalid("p + q vanishes")
        if np.any(self._px(x) * self._qy(y) >= 0):
            raise ChartInvalid("p_x q_y must be negative")

    def s(self, x) -> np.ndarray:
        return 8.0 * eval_scalar(self.p, x)

    def t(self, x, y) -> np.ndarray:
        return 1.0 / (eval_scalar(self.p, x) + eval_scalar(self.q, y))

    def st(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return self.s(x), self.t(x, y)

    def derivatives(self, x, y):
        """(s_x, t_x, t_y)."""
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        pq = eval_scalar(self.p, x) + eval_scalar(self.q, y)
        px, qy = self._px(x), self._qy(y)
        return 8.0 * px, -px / pq ** 2, -qy / pq ** 2

    def w(self, x, y) -> np.ndarray:
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        pq = eval_scalar(self.p, x) + eval_scalar(self.q, y)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.log(-self._px(x) * self._qy(y) / pq ** 2)

    def compose(self, f: NullScroll) -> Callable:
        """(x, y) -> f(s(x), t(x, y))."""
        return lambda x, y: evaluate(f, *self.st(x, y))


@dataclass
class NullCoordinates:
    chart: NullChart
    s: np.ndarray
    t: np.ndarray
    conformal_residual: float
    sy_residual: float


def null_coordinates(chart: NullChart, f: Optional[NullScroll] = None, x=None, y=None,
                     h: float = 1e-5) -> NullCoordinates:
    """Map (x, y) -> (s, t) with conformality residuals |g11 s_x + 2 g12 t_x| and |s_y|."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    chart.check(x, y)
    s, t = chart.st(x, y)
    sy = np.abs((chart.st(x, y + h)[0] - chart.st(x, y - h)[0]) / (2 * h))
    conf = np.nan
    if f is not None:
        sx, tx, _ = chart.derivatives(x, y)
        conf = float(np.max(np.abs(g11_polynomial(f, s, t) * sx + 2 * g12_polynomial(f, s, t) * tx)))
    return NullCoordinates(chart, s, t, conf, float(np.max(sy)))


@dataclass
class SupportValue:
    closed: np.ndarray
    definitional: np.ndarray
    epsilon: np.ndarray


def support_function(f: NullScroll, chart: NullChart, x, y, h1: float = fdgeom.FD_STEP1,
                     h2: float = fdgeom.FD_STEP2) -> SupportValue:
    """Closed form sqrt(2) eps |s_x t_y|^{1/2} and the definitional
    -e^{u/2} g(N, E3) from finite differences in the chart."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    chart.check(x, y)
    s, t = chart.st(x, y)
    sx, tx, ty = chart.derivatives(x, y)
    fs, ft = scroll_partials(f, s, t)
    eps = np.sign(nil3.cross(fs, ft)[..., 2])
    closed = math.sqrt(2.0) * eps * np.sqrt(np.abs(sx * ty))
    geo = fdgeom.surface_geometry(chart.compose(f), x, y, h1, h2)
    if np.any(geo.F <= 0):
        raise ChartInvalid("2 g(f_x, f_y) must be positive in a null chart")
    definitional = -np.sqrt(2 * geo.F) * geo.normal[..., 2]
    return SupportValue(closed, definitional, eps)


@dataclass
class ARValue:
    closed: ParaComplex
    definitional: ParaComplex


def abresch_rosenberg_definitional(geo: fdgeom.SurfaceGeometry, H=0.0) -> ParaComplex:
    """((2H - i') / 4) Qtilde - (phi3)^2 / 4 in null coordinates."""
    # in the null basis i' acts as diag(1, -1)
    a = (2 * H - 1) / 4 * geo.L - geo.Xu[..., 2] ** 2 / 4
    b = (2 * H + 1) / 4 * geo.N - geo.Xv[..., 2] ** 2 / 4
    return ParaComplex.from_null(a, b)


def abresch_rosenberg(f: NullScroll, chart: NullChart, x, y, h1: float = fdgeom.FD_STEP1,
                      h2: float = fdgeom.FD_STEP2, use_frame: bool = True) -> ARValue:
    """Closed-form and definitional Abresch-Rosenberg coefficient Q.

    Closed form: (l/4) s_x^2 k1 when the scroll carries a frame, else
    (l/4)(-s_x^2 (h11 + D3^2) - 2 s_x t_x D3 B3), which uses minimality
    and conformality. Either way Q is an exact real multiple of l.
    ``use_frame=False`` forces the frame-free form.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    chart.check(x, y)
    s, t = chart.st(x, y)
    sx, tx, _ = chart.derivatives(x, y)
    if use_frame and f.k1 is not None:
        a = sx ** 2 * eval_scalar(f.k1, s)
    else:
        fd = fundamental_data(f, s, t)
        b3 = f.Btilde.value(s)[..., 2]
        a = -sx ** 2 * (fd.h11 + fd.D3 ** 2) - 2 * sx * tx * fd.D3 * b3
    closed = ParaComplex.from_null(a / 4, np.zeros_like(a))
    geo = fdgeom.surface_geometry(chart.compose(f), x, y, h1, h2)
    return ARValue(closed, abresch_rosenberg_definitional(geo))


def liouville_residual(chart: NullChart, x, y, step: float = 1e-3, bounds: Optional[Domain] = None) -> np.ndarray:
    """|w_xy / 2 + e^w| by finite differences of w in null coordinates.

    In z = l x + lbar y one has d_z d_zbar = d_x d_y, so this is the
    residual of w_{z zbar}/2 + e^w = 0.
    """
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if bounds is not None:
        (x0, x1), (y0, y1) = bounds
        if np.any(x - step < x0) or np.any(x + step > x1) or np.any(y - step < y0) or np.any(y + step > y1):
            raise OutOfGrid("Liouville stencil leaves the chart domain")
    chart.check(x, y)
    w = chart.w
    h = step
    wxy = (w(x + h, y + h) - w(x + h, y - h) - w(x - h, y + h) + w(x - h, y - h)) / (4 * h * h)
    return np.abs(0.5 * wxy + np.exp(w(x, y)))


# ----------------------------------------------------------- grid report

def grid_mask(f: NullScroll, S, T, tol: float = 1e-6) -> np.ndarray:
    """True where the point is usable (g12 clearly nonzero)."""
    g12 = g12_polynomial(f, S, T)
    return np.isfinite(g12) & (np.abs(g12) > tol)


def grid_report(f: NullScroll, s_values, t_values, chart: Optional[NullChart] = None,
                xy: Optional[Tuple[np.ndarray, np.ndarray]] = None, mask_tol: float = 1e-6) -> dict:
    """JSON-ready summary {grid, mask, maxH, meanH, maxGramDrift, maxLiouville, epsilonSign}."""
    s_values = np.asarray(s_values, dtype=float)
    t_values = np.asarray(t_values, dtype=float)
    S, T = np.meshgrid(s_values, t_values, indexing="ij")
    mask = grid_mask(f, S, T, mask_tol)
    H = fundamental_data(f, S, T, strict=False).H
    good = np.abs(H[mask])
    fs, ft = scroll_partials(f, S, T)
    eps = np.sign(nil3.cross(fs, ft)[..., 2])[mask]
    eps_sign = int(eps[0]) if eps.size and np.all(eps == eps[0]) else 0
    max_liou = None
    if chart is not None and xy is not None:
        X, Y = np.meshgrid(*xy, indexing="ij")
        max_liou = float(np.max(liouville_residual(chart, X, Y)))
    return {
        "grid": {"s": [float(s_values[0]), float(s_values[-1]), int(len(s_values))],
                 "t": [float(t_values[0]), float(t_values[-1]), int(len(t_values))]},
        "mask": mask.tolist(),
        "maxH": float(np.max(good)) if good.size else None,
        "meanH": float(np.mean(good)) if good.size else None,
        "maxGramDrift": f.frame.gram_drift() if f.frame is not None else None,
        "maxLiouville": max_liou,
        "epsilonSign": eps_sign,
    }
