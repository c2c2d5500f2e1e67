"""Constructors of minimal null scrolls and the closed-form example gallery."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from . import nil3
from .curves import (AnalyticCurve, Func, ReparamCurve, SampledCurve, VectorCurve, as_curve, eval_scalar,
                     flip3, scalar_derivative)
from .errors import (AlphaVanishes, BadFrame, BetaNotHalf, BetaZero, ChartInvalid, NotNull, UnknownName,
                     ValidationError, ZeroB3, ZeroC3)
from .nullcurve import F0_ORIENTED, Ruling, compute_beta, integrate_frame_system, reconstruct_curve
from .scroll import NullChart, NullScroll

DEFAULT_SPAN = (-2.0, 2.0)
DEFAULT_STEP = 1e-3


def _stack(*cols):
    cols = np.broadcast_arrays(*cols)
    return np.stack(cols, axis=-1)


# --------------------------------------------------------------- rulings

def circle_ruling() -> VectorCurve:
    """Btilde = (1, cos s, sin s)/2, beta = 1/2."""
    return AnalyticCurve(
        lambda s: 0.5 * _stack(np.ones_like(s), np.cos(s), np.sin(s)),
        lambda s: 0.5 * _stack(np.zeros_like(s), -np.sin(s), np.cos(s)),
        lambda s: 0.5 * _stack(np.zeros_like(s), -np.cos(s), -np.sin(s)),
    )


def hyperbola_ruling() -> VectorCurve:
    """Btilde = (cosh s, sinh s, -1)/2, beta = 1/2."""
    return AnalyticCurve(
        lambda s: 0.5 * _stack(np.cosh(s), np.sinh(s), -np.ones_like(s)),
        lambda s: 0.5 * _stack(np.sinh(s), np.cosh(s), np.zeros_like(s)),
        lambda s: 0.5 * _stack(np.cosh(s), np.sinh(s), np.zeros_like(s)),
    )


def parabola_ruling() -> VectorCurve:
    """Btilde = (s^2/8 + 1/2, s/2, s^2/8 - 1/2), beta = 1/2."""
    return AnalyticCurve(
        lambda s: _stack(s * s / 8 + 0.5, s / 2, s * s / 8 - 0.5),
        lambda s: _stack(s / 4, 0.5 * np.ones_like(s), s / 4),
        lambda s: _stack(0.25 * np.ones_like(s), np.zeros_like(s), 0.25 * np.ones_like(s)),
    )


def constant_direction_ruling(c: Sequence[float], scale: Optional[Func] = None, k: Optional[Func] = None,
                              tol: float = 1e-12) -> VectorCurve:
    """Btilde = m(s) c with c a null vector.

    m defaults to exp(integral_0^s k) when ``k`` is given, else 1. A
    callable ``scale`` sets m directly.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (3,):
        raise ValidationError("direction must have three components")
    if abs(nil3.metric(c, c)) > tol * max(1.0, float(c @ c)):
        raise NotNull("constant ruling direction must be null")
    if scale is None:
        if k is None:
            m, dm, d2m = 1.0, 0.0, 0.0
        else:
            from scipy.integrate import quad

            def m(s):
                s = np.asarray(s, dtype=float)
                return np.exp(np.vectorize(lambda u: quad(lambda v: float(eval_scalar(k, v)), 0.0, u)[0])(s))

            def dm(s):
                return eval_scalar(k, s) * m(s)

            def d2m(s):
                return (scalar_derivative(k, s) + eval_scalar(k, s) ** 2) * m(s)
    else:
        m, dm, d2m = scale, None, None

    def _d(fn, s, order):
        if fn is not None:
            return eval_scalar(fn, s)
        h = 1e-5 if order == 1 else 1e-4
        if order == 1:
            return (eval_scalar(m, s + h) - eval_scalar(m, s - h)) / (2 * h)
        return (eval_scalar(m, s + h) - 2 * eval_scalar(m, s) + eval_scalar(m, s - h)) / (h * h)

    return AnalyticCurve(
        lambda s: eval_scalar(m, s)[..., None] * c,
        lambda s: _d(dm, s, 1)[..., None] * c,
        lambda s: _d(d2m, s, 2)[..., None] * c,
    )


def sampled_ruling(s, values) -> VectorCurve:
    return SampledCurve(s, values)


@dataclass
class RulingSpec:
    """Named ruling: circle, hyperbola, parabola, constant or sampled."""
    variant: str
    c: Optional[Tuple[float, float, float]] = None
    k: Optional[Func] = None
    scale: Optional[Func] = None
    curve_data: Optional[VectorCurve] = None

    def curve(self) -> VectorCurve:
        if self.variant == "circle":
            return circle_ruling()
        if self.variant == "hyperbola":
            return hyperbola_ruling()
        if self.variant == "parabola":
            return parabola_ruling()
        if self.variant == "constant":
            if self.c is None:
                raise ValidationError("constant ruling needs a direction c")
            return constant_direction_ruling(self.c, self.scale, self.k)
        if self.variant == "sampled":
            if self.curve_data is None:
                raise ValidationError("sampled ruling needs curve data")
            return self.curve_data
        raise UnknownName(f"unknown ruling variant {self.variant!r}")


@dataclass
class ConstructionParams:
    alpha: Func = 1.0
    b: Func = 0.0
    span: Tuple[float, float] = DEFAULT_SPAN
    step: float = DEFAULT_STEP
    s0: float = 0.0


def _ruling_curve(spec) -> VectorCurve:
    if isinstance(spec, RulingSpec):
        return spec.curve()
    return as_curve(spec)


def _samples(span, n: int = 401) -> np.ndarray:
    return np.linspace(span[0], span[1], n)


def _check_alpha(alpha: Func, s: np.ndarray) -> None:
    a = eval_scalar(alpha, s)
    if np.any(a == 0) or (np.any(a > 0) and np.any(a < 0)):
        raise AlphaVanishes("alpha must not vanish on the span")


# -------------------------------------------------------------- branches

def construct_beta_zero(spec, alpha: Func = 1.0, span=DEFAULT_SPAN, step: float = DEFAULT_STEP,
                        s0: float = 0.0, domain=None, name: str = "beta-zero") -> NullScroll:
    """beta = 0 branch: constant-direction ruling Btilde = m(s) c and
    A = alpha (c1, c2, -c3); gamma is a null line for constant alpha."""
    if isinstance(spec, RulingSpec):
        if spec.variant != "constant":
            raise ValidationError("beta-zero branch needs a constant-direction ruling")
        c = np.asarray(spec.c, dtype=float)
        Bt = spec.curve()
    else:
        c = np.asarray(spec, dtype=float)
        Bt = constant_direction_ruling(c)
    if c[2] == 0:
        raise ZeroC3("third component of the ruling direction must be nonzero")
    samples = _samples(span)
    _check_alpha(alpha, samples)
    direction = c * np.array([1.0, 1.0, -1.0])
    A = AnalyticCurve(lambda s: eval_scalar(alpha, s)[..., None] * direction,
                      lambda s: scalar_derivative(alpha, s)[..., None] * direction)
    gamma = reconstruct_curve(A, span, step, s0)
    beta = _zero_beta(Bt)
    ruling = Ruling(Bt, beta)
    if domain is None:
        domain = ((max(span[0], 0.2), span[1]), (-1.0, 1.0))
    return NullScroll(gamma, A, ruling, name=name, domain=domain)


def _zero_beta(Bt):
    from .nullcurve import BetaFunction

    class _Zero(BetaFunction):
        def __call__(self, s):
            return np.zeros(np.shape(s))

    return _Zero(Bt)


def beta_half_velocity(Bt: VectorCurve, b: Func = 0.0) -> AnalyticCurve:
    """A = -4(2 g(B'', B'') B + B'') - 2 b (B' + (b/4) B) for the induced B."""
    B = flip3(Bt)

    def A(s):
        s = np.asarray(s, dtype=float)
        v, d1, d2 = B.value(s), B.d1(s), B.d2(s)
        bb = eval_scalar(b, s)[..., None]
        return -4 * (2 * nil3.metric(d2, d2)[..., None] * v + d2) - 2 * bb * (d1 + bb / 4 * v)

    return AnalyticCurve(A)


def construct_beta_half(spec, b: Func = 0.0, span=DEFAULT_SPAN, step: float = DEFAULT_STEP, s0: float = 0.0,
                        domain=None, name: str = "beta-half", tol: float = 1e-9,
                        velocity: Optional[VectorCurve] = None) -> NullScroll:
    """beta = 1/2 branch with free function b.

    ``velocity`` may supply A in closed form (with derivative); it is
    checked against the defining formula.
    """
    Bt = _ruling_curve(spec)
    samples = _samples(span)
    beta = compute_beta(Bt, samples)
    if np.max(np.abs(beta(samples) - 0.5)) > tol:
        raise BetaNotHalf("ruling must be normalized to beta = 1/2")
    A = beta_half_velocity(Bt, b)
    if velocity is not None:
        if np.max(np.abs(velocity.value(samples) - A.value(samples))) > 1e-9:
            raise ValidationError("supplied velocity does not match the beta = 1/2 formula")
        A = velocity
    Av, Bi = A.value(samples), Bt.value(samples) * np.array([1.0, 1.0, -1.0])
    if np.max(np.abs(nil3.metric(Av, Av))) > tol or np.max(np.abs(nil3.metric(Av, Bi) - 1)) > tol:
        raise BetaNotHalf("A is not null with g(A, B) = 1; the ruling data are inconsistent")
    gamma = reconstruct_curve(A, span, step, s0)
    return NullScroll(gamma, A, Ruling(Bt, beta), name=name, domain=domain or ((-1.0, 1.0), (-1.0, 1.0)))


def construct_tangent(spec, alpha: Func = 1.0, span=DEFAULT_SPAN, step: float = DEFAULT_STEP, s0: float = 0.0,
                      domain=None, name: str = "tangent") -> NullScroll:
    """Tangent branch A = alpha Btilde (g(A, Btilde) = 0); minimal where t != 0."""
    Bt = _ruling_curve(spec)
    samples = _samples(span)
    beta = compute_beta(Bt, samples)
    bv = beta(samples)
    if np.any(bv == 0) or (np.any(bv > 0) and np.any(bv < 0)):
        raise BetaZero("tangent branch needs beta != 0")
    if np.any(Bt.value(samples)[:, 2] == 0) or np.ptp(np.sign(Bt.value(samples)[:, 2])) != 0:
        raise ZeroB3("tangent branch needs B3 != 0")
    _check_alpha(alpha, samples)
    A = AnalyticCurve(lambda s: eval_scalar(alpha, s)[..., None] * Bt.value(s),
                      lambda s: scalar_derivative(alpha, s)[..., None] * Bt.value(s)
                      + eval_scalar(alpha, s)[..., None] * Bt.d1(s))
    gamma = reconstruct_curve(A, span, step, s0)
    return NullScroll(gamma, A, Ruling(Bt, beta), name=name, domain=domain or ((-1.0, 1.0), (0.05, 2.0)))


def construct_from_curvature(k1: Func, span=DEFAULT_SPAN, step: float = DEFAULT_STEP, s0: float = 0.0,
                             init: np.ndarray = F0_ORIENTED, domain=None, name: str = "curvature") -> NullScroll:
    """Frame from (k1, k2 = 1/2), base curve from A, ruling = B with B3 negated.

    The initial frame must satisfy C = A x B; with the opposite
    orientation the ruling has beta = -1/2 and the scroll is not minimal.
    """
    if np.linalg.det(np.asarray(init, dtype=float)) <= 0:
        raise BadFrame("initial frame must satisfy C = A x B (positive determinant)")
    frame = integrate_frame_system(k1, 0.5, init, span, step, s0)
    A = frame.curve("A")
    gamma = reconstruct_curve(A, span, step, s0)
    Bt = flip3(frame.curve("B"))
    lo, hi = frame.span
    beta = compute_beta(Bt, np.linspace(lo, hi, 401))
    return NullScroll(gamma, A, Ruling(Bt, beta), name=name, frame=frame,
                      domain=domain or ((max(lo, -1.0), min(hi, 1.0)), (-1.0, 1.0)))


def invert_monotone(p: Func, px: Optional[Func], x_range, n: int = 20001) -> Callable:
    """Inverse of a strictly monotone function on x_range (table + Newton)."""
    xs = np.linspace(x_range[0], x_range[1], n)
    ps = eval_scalar(p, xs)
    dp = np.diff(ps)
    if not (np.all(dp > 0) or np.all(dp < 0)):
        raise ChartInvalid("p must be strictly monotone on the x range")
    order = np.argsort(ps)
    ps_sorted, xs_sorted = ps[order], xs[order]

    def inv(v):
        v = np.asarray(v, dtype=float)
        x = np.interp(v, ps_sorted, xs_sorted)
        for _ in range(3):
            d = eval_scalar(px, x) if px is not None else scalar_derivative(p, x)
            x = x - (eval_scalar(p, x) - v) / d
        return x

    return inv


def construct_from_ar_data(S: Func, p: Func, q: Func, x_range=(-1.0, 1.0), y_range=(0.5, 2.0),
                           px: Optional[Func] = None, qy: Optional[Func] = None, step: float = DEFAULT_STEP,
                           name: str = "ar-data") -> NullScroll:
    """Scroll with Abresch-Rosenberg coefficient l S(x) in the chart
    s = 8 p(x), t = 1/(p + q): k1(s(x)) = S(x)/(16 p_x^2), k2 = 1/2."""
    chart = NullChart(p, q, px=px, qy=qy, S=S, T=0.0, x_range=tuple(x_range), y_range=tuple(y_range))
    X, Y = np.meshgrid(np.linspace(*x_range, 41), np.linspace(*y_range, 41), indexing="ij")
    chart.check(X, Y)
    pad = 0.05 * (x_range[1] - x_range[0])
    xr = (x_range[0] - pad, x_range[1] + pad)
    x_of_s = invert_monotone(lambda x: 8 * eval_scalar(p, x), (lambda x: 8 * eval_scalar(px, x)) if px else None, xr)
    pxf = px if px is not None else (lambda x: scalar_derivative(p, x))

    def k1(s):
        x = x_of_s(s)
        return eval_scalar(S, x) / (16 * eval_scalar(pxf, x) ** 2)

    s_lo, s_hi = sorted(8 * eval_scalar(p, np.array(xr)))
    s0 = 0.0 if s_lo < 0.0 < s_hi else 0.5 * (s_lo + s_hi)
    f = construct_from_curvature(k1, (s_lo, s_hi), step, s0, name=name)
    f.chart = chart
    f.meta["x_of_s"] = x_of_s
    S_, T_ = chart.st(X, Y)
    f.domain = ((float(S_.min()), float(S_.max())), (float(T_.min()), float(T_.max())))
    return f


# ---------------------------------------------------------------- gallery

@dataclass
class GallerySurface:
    """Closed-form surface (s, t) -> coordinates with a default domain."""
    name: str
    formula: Callable[[np.ndarray, np.ndarray], np.ndarray]
    domain: Tuple[Tuple[float, float], Tuple[float, float]]
    params: dict = field(default_factory=dict)

    def __call__(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        return self.formula(s, t)


def _circle(s, t):
    return _stack(-s + t / 2, np.sin(s) + t * np.cos(s) / 2,
                  -s * np.sin(s) / 2 + t * np.sin(s) / 4 - t * s * np.cos(s) / 4)


def _hyperbola(s, t):
    return _stack(-np.sinh(s) + t * np.cosh(s) / 2, -np.cosh(s) + 1 + t * np.sinh(s) / 2,
                  s / 2 + np.sinh(s) / 2 - t / 4 - t * np.cosh(s) / 4)


def _parabola(b):
    def f(s, t):
        x1 = -b ** 2 / 48 * s ** 3 - b / 4 * s ** 2 - (b ** 2 / 4 + 1) * s + t * (s ** 2 / 8 + 0.5)
        x2 = -b ** 2 / 8 * s ** 2 - b * s + s * t / 2
        x3 = (-b ** 4 / 3840 * s ** 5 - b ** 3 / 192 * s ** 4 + b ** 4 / 192 * s ** 3 + b / 4 * s ** 2
              + (1 - b ** 2 / 4) * s + t * (b ** 2 / 384 * s ** 4 - (1 / 8 + b ** 2 / 32) * s ** 2 + b / 4 * s - 0.5))
        return _stack(x1, x2, x3)
    return f


def _vertical_plane(theta):
    c, sn = math.cos(theta), math.sin(theta)

    def f(s, t):
        return _stack((1 + t) * s, (1 + t) * s * c, (1 + t) * s * sn - 2 * s * sn)
    return f


def _horizontal_umbrella(init=F0_ORIENTED):
    A0, B0, C0 = init[:, 0], init[:, 1], init[:, 2]

    def f(s, t):
        a = (s - s * s * t / 8)[..., None]
        t_, st = t[..., None], (s * t / 2)[..., None]
        first = a * A0[:2] + t_ * B0[:2] + st * C0[:2]
        third = a[..., 0] * A0[2] - t * B0[2]
        return np.concatenate([first, third[..., None]], axis=-1)
    return f


def tangent_base_curve() -> AnalyticCurve:
    """Null curve with velocity (cosh s, sinh s, -1)/2 through the origin."""
    return AnalyticCurve(
        lambda s: _stack(np.sinh(s) / 2, (np.cosh(s) - 1) / 2, -5 * s / 8 + np.sinh(s) / 8),
        lambda s: _stack(np.cosh(s) / 2, np.sinh(s) / 2, -5 / 8 + np.cosh(s) / 8),
    )


def _tangent(gamma: VectorCurve, alpha: float):
    def f(s, t):
        return gamma.value(s) + (t / alpha)[..., None] * gamma.d1(s)
    return f


GALLERY_NAMES = ("circle", "hyperbola", "parabola", "vertical_plane", "horizontal_umbrella", "tangent")


def example_gallery(name: str, **params) -> GallerySurface:
    """Closed-form example surfaces."""
    key = name.replace("-", "_")
    if key == "circle":
        return GallerySurface(key, _circle, ((-1.0, 1.0), (-1.0, 1.0)))
    if key == "hyperbola":
        return GallerySurface(key, _hyperbola, ((-1.0, 1.0), (0.5, 1.5)))
    if key == "parabola":
        b = float(params.get("b", 0.0))
        dom = ((1.0, 2.0), (0.0, 1.0)) if b == 0 else ((-2.0, -1.0), (-1.0, 0.0))
        return GallerySurface(key, _parabola(b), dom, {"b": b})
    if key == "vertical_plane":
        theta = float(params.get("theta", math.pi / 3))
        return GallerySurface(key, _vertical_plane(theta), ((0.2, 2.0), (-1.0, 1.0)), {"theta": theta})
    if key == "horizontal_umbrella":
        return GallerySurface(key, _horizontal_umbrella(params.get("init", F0_ORIENTED)), ((-1.0, 1.0), (-1.0, 1.0)))
    if key == "tangent":
        gamma = params.get("gamma") or tangent_base_curve()
        alpha = float(params.get("alpha", 1.0))
        return GallerySurface(key, _tangent(gamma, alpha), ((-1.0, 1.0), (0.05, 2.0)), {"alpha": alpha})
    raise UnknownName(f"unknown gallery surface {name!r}")


GALLERY_SPAN = (-3.0, 3.0)


def construct_gallery(name: str, span=GALLERY_SPAN, step: float = DEFAULT_STEP, **params) -> NullScroll:
    """Build the constructor output matching ``example_gallery(name)``."""
    key = name.replace("-", "_")
    g = example_gallery(key, **params)
    if key == "circle":
        return construct_beta_half(RulingSpec("circle"), 0.0, span, step, domain=g.domain, name=key)
    if key == "hyperbola":
        return construct_beta_half(RulingSpec("hyperbola"), 0.0, span, step, domain=g.domain, name=key)
    if key == "parabola":
        return construct_beta_half(RulingSpec("parabola"), g.params["b"], span, step, domain=g.domain, name=key)
    if key == "vertical_plane":
        th = g.params["theta"]
        spec = RulingSpec("constant", c=(1.0, math.cos(th), math.sin(th)),
                          scale=lambda s: np.asarray(s, dtype=float))
        return construct_beta_zero(spec, 1.0, span, step, domain=g.domain, name=key)
    if key == "horizontal_umbrella":
        return construct_from_curvature(0.0, span, step, init=params.get("init", F0_ORIENTED), domain=g.domain,
                                        name=key)
    if key == "tangent":
        return construct_tangent(RulingSpec("hyperbola"), g.params["alpha"], span, step, domain=g.domain, name=key)
    raise UnknownName(f"unknown gallery surface {name!r}")


def align(values: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Left-translate so that ``reference`` moves to the origin."""
    return nil3.group_mul(nil3.group_inv(reference), values)


def gallery_deviation(f: NullScroll, g: GallerySurface, n: int = 41, ref: Tuple[float, float] = (0.0, 0.0),
                      domain=None) -> float:
    """Max coordinate deviation on an n x n grid after aligning both
    surfaces by left translation at the reference parameter."""
    (s0, s1), (t0, t1) = domain or g.domain
    S, T = np.meshgrid(np.linspace(s0, s1, n), np.linspace(t0, t1, n), indexing="ij")
    a = align(f.eval(S, T), f.eval(*ref))
    b = align(g(S, T), g(*ref))
    return float(np.max(np.abs(a - b)))


def perturb_ruling(f: NullScroll, eps: float = 0.01) -> NullScroll:
    """Same base curve, ruling reparametrized as Btilde((1 + eps) s).

    The ruling stays light-cone valued but the minimality condition
    generally fails."""
    Bt = ReparamCurve(f.Btilde, 1.0 + eps)
    lo, hi = f.gamma.span if hasattr(f.gamma, "span") else DEFAULT_SPAN
    lam = 1.0 + eps
    samples = np.linspace(lo / lam, hi / lam, 401)
    try:
        beta = compute_beta(Bt, samples)
    except ValidationError:
        beta = _zero_beta(Bt)
    return NullScroll(f.gamma, f.A, Ruling(Bt, beta), name=f"{f.name}-perturbed", domain=f.domain)
