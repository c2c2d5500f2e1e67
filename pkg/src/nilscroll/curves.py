"""Vector-valued curves of one parameter with first and second derivatives.

Two flavours: closed-form callables (:class:`AnalyticCurve`) and sampled
data (:class:`SampledCurve`). Both evaluate on arrays and return arrays
with a trailing axis of length 3.
"""
from __future__ import annotations

from typing import Callable, Optional, Union

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline, PPoly

from .errors import ValidationError

Func = Union[float, Callable[[np.ndarray], np.ndarray]]


def eval_scalar(fn: Func, s) -> np.ndarray:
    """Evaluate a constant or callable on an array, vectorizing if needed."""
    s = np.asarray(s, dtype=float)
    if callable(fn):
        try:
            out = np.asarray(fn(s), dtype=float)
        except (TypeError, ValueError):
            out = np.vectorize(lambda u: float(fn(u)))(s)
        if out.shape != s.shape:
            out = np.broadcast_to(out, s.shape).copy()
        return out
    return np.full(s.shape, float(fn))


def scalar_derivative(fn: Func, s, h: float = 1e-5) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if not callable(fn):
        return np.zeros(s.shape)
    d = getattr(fn, "derivative", None)
    if d is not None:
        return eval_scalar(d, s)
    return (eval_scalar(fn, s + h) - eval_scalar(fn, s - h)) / (2 * h)


class VectorCurve:
    """Interface: value, d1, d2 evaluate on scalars or arrays."""

    def value(self, s) -> np.ndarray:
        raise NotImplementedError

    def d1(self, s) -> np.ndarray:
        raise NotImplementedError

    def d2(self, s) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, s) -> np.ndarray:
        return self.value(s)


class AnalyticCurve(VectorCurve):
    """Curve given by callables; missing derivatives use central differences."""

    def __init__(self, f, df=None, d2f=None, h1: float = 1e-5, h2: float = 1e-4):
        self._f, self._df, self._d2f = f, df, d2f
        self.h1, self.h2 = h1, h2

    def _shape(self, fn, s):
        s = np.asarray(s, dtype=float)
        out = np.asarray(fn(s), dtype=float)
        return np.broadcast_to(out, s.shape + (3,)).copy()

    def value(self, s):
        return self._shape(self._f, s)

    def d1(self, s):
        if self._df is not None:
            return self._shape(self._df, s)
        s = np.asarray(s, dtype=float)
        return (self.value(s + self.h1) - self.value(s - self.h1)) / (2 * self.h1)

    def d2(self, s):
        if self._d2f is not None:
            return self._shape(self._d2f, s)
        s = np.asarray(s, dtype=float)
        if self._df is not None:
            return (self.d1(s + self.h1) - self.d1(s - self.h1)) / (2 * self.h1)
        h = self.h2
        return (self.value(s + h) - 2 * self.value(s) + self.value(s - h)) / (h * h)


def quintic_hermite(s, y, d1, d2) -> PPoly:
    """Piecewise quintic matching values, first and second derivatives."""
    h = np.diff(s).reshape((-1,) + (1,) * (y.ndim - 1))
    y0, y1, a0, a1, b0, b1 = y[:-1], y[1:], d1[:-1], d1[1:], d2[:-1], d2[1:]
    r0 = y1 - (y0 + a0 * h + b0 * h * h / 2)
    r1 = (a1 - (a0 + b0 * h)) * h
    r2 = (b1 - b0) * h * h
    c3 = (20 * r0 - 8 * r1 + r2) / (2 * h ** 3)
    c4 = (-30 * r0 + 14 * r1 - 2 * r2) / (2 * h ** 4)
    c5 = (12 * r0 - 6 * r1 + r2) / (2 * h ** 5)
    return PPoly(np.stack([c5, c4, c3, b0 / 2, a0, y0]), s)


class SampledCurve(VectorCurve):
    """Interpolated samples on a strictly increasing grid.

    Values only: not-a-knot cubic spline. With first derivatives: cubic
    Hermite. With first and second derivatives: quintic Hermite, which is
    C2 so that second differences across knots stay smooth.
    """

    def __init__(self, s, values, d1=None, d2=None):
        s = np.asarray(s, dtype=float)
        values = np.asarray(values, dtype=float)
        if s.ndim != 1 or len(s) < 4:
            raise ValidationError("sampled curve needs at least 4 samples")
        if np.any(np.diff(s) <= 0):
            raise ValidationError("sample parameters must be strictly increasing")
        if values.shape != (len(s), 3):
            raise ValidationError(f"expected values of shape ({len(s)}, 3), got {values.shape}")
        self.s = s
        self.samples = values
        if d1 is None:
            self._spline = CubicSpline(s, values, axis=0, bc_type="not-a-knot")
        elif d2 is None:
            self._spline = CubicHermiteSpline(s, values, np.asarray(d1, dtype=float), axis=0)
        else:
            self._spline = quintic_hermite(s, values, np.asarray(d1, dtype=float), np.asarray(d2, dtype=float))
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)

    @property
    def span(self):
        return float(self.s[0]), float(self.s[-1])

    def value(self, s):
        return self._spline(np.asarray(s, dtype=float))

    def d1(self, s):
        return self._d1(np.asarray(s, dtype=float))

    def d2(self, s):
        return self._d2(np.asarray(s, dtype=float))


class ScaledCurve(VectorCurve):
    """c(s) * base(s) for a scalar function c with optional derivatives."""

    def __init__(self, base: VectorCurve, c: Func, dc: Optional[Func] = None, d2c: Optional[Func] = None,
                 h: float = 1e-5):
        self.base, self.c, self.dc, self.d2c, self.h = base, c, dc, d2c, h

    def _c(self, s):
        return eval_scalar(self.c, s)[..., None]

    def _dc(self, s):
        if self.dc is not None:
            return eval_scalar(self.dc, s)[..., None]
        return scalar_derivative(self.c, s, self.h)[..., None]

    def _d2c(self, s):
        if self.d2c is not None:
            return eval_scalar(self.d2c, s)[..., None]
        s = np.asarray(s, dtype=float)
        h = self.h
        return ((self._dc(s + h) - self._dc(s - h)) / (2 * h))

    def value(self, s):
        return self._c(s) * self.base.value(s)

    def d1(self, s):
        return self._dc(s) * self.base.value(s) + self._c(s) * self.base.d1(s)

    def d2(self, s):
        return (self._d2c(s) * self.base.value(s) + 2 * self._dc(s) * self.base.d1(s)
                + self._c(s) * self.base.d2(s))


class ReparamCurve(VectorCurve):
    """base(lam * s)."""

    def __init__(self, base: VectorCurve, lam: float):
        self.base, self.lam = base, float(lam)

    def value(self, s):
        return self.base.value(self.lam * np.asarray(s, dtype=float))

    def d1(self, s):
        return self.lam * self.base.d1(self.lam * np.asarray(s, dtype=float))

    def d2(self, s):
        return self.lam ** 2 * self.base.d2(self.lam * np.asarray(s, dtype=float))


def flip3(curve: VectorCurve) -> VectorCurve:
    """Negate the third component: (v1, v2, v3) -> (v1, v2, -v3)."""
    sign = np.array([1.0, 1.0, -1.0])
    return AnalyticCurve(lambda s: sign * curve.value(s), lambda s: sign * curve.d1(s),
                         lambda s: sign * curve.d2(s))


def as_curve(obj) -> VectorCurve:
    if isinstance(obj, VectorCurve):
        return obj
    if callable(obj):
        return AnalyticCurve(obj)
    v = np.asarray(obj, dtype=float)
    if v.shape == (3,):
        return AnalyticCurve(lambda s: np.broadcast_to(v, np.shape(s) + (3,)),
                             lambda s: np.zeros(np.shape(s) + (3,)),
                             lambda s: np.zeros(np.shape(s) + (3,)))
    raise ValidationError(f"cannot interpret {type(obj).__name__} as a curve")


def simpson_cumulative(s: np.ndarray, f_nodes: np.ndarray, f_mid: np.ndarray, s0_index: int) -> np.ndarray:
    """Cumulative integral on a grid using node and midpoint values.

    Each cell [s_i, s_{i+1}] gets Simpson's rule with the midpoint sample
    f_mid[i]; the result is zero at node ``s0_index``.
    """
    ds = np.diff(s)
    shape = (-1,) + (1,) * (f_nodes.ndim - 1)
    cell = ds.reshape(shape) / 6.0 * (f_nodes[:-1] + 4 * f_mid + f_nodes[1:])
    out = np.concatenate([np.zeros_like(f_nodes[:1]), np.cumsum(cell, axis=0)], axis=0)
    return out - out[s0_index]
