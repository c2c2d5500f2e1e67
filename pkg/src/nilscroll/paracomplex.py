"""Para-complex (split-complex) numbers x + i'y with i'^2 = 1.

Values may hold numpy arrays in ``re`` and ``im``; all arithmetic
broadcasts. The null basis l = (1+i')/2, lbar = (1-i')/2 diagonalizes
multiplication: a*l + b*lbar multiplies componentwise in (a, b).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .errors import NoRoot, NotInvertible, OutOfGrid

Real = Union[float, np.ndarray]


@dataclass(frozen=True)
class ParaComplex:
    re: Real
    im: Real = 0.0

    @classmethod
    def from_null(cls, a: Real, b: Real) -> "ParaComplex":
        """Build a*l + b*lbar."""
        return cls((a + b) / 2, (a - b) / 2)

    @property
    def lpart(self) -> Real:
        """Coefficient of l."""
        return self.re + self.im

    @property
    def lbarpart(self) -> Real:
        """Coefficient of lbar."""
        return self.re - self.im

    def conj(self) -> "ParaComplex":
        return ParaComplex(self.re, -self.im)

    def norm2(self) -> Real:
        """z * conj(z) = re^2 - im^2, a real number of either sign."""
        return self.re * self.re - self.im * self.im

    def __add__(self, other):
        o = _coerce(other)
        return ParaComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        return ParaComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return ParaComplex(-self.re, -self.im)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ParaComplex):
            return mul(self, inverse(other))
        return ParaComplex(self.re / other, self.im / other)

    def __abs__(self):
        """Largest absolute component; convenient for error checks."""
        return np.maximum(np.abs(self.re), np.abs(self.im))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        o = _coerce(other)
        return bool(np.all(np.abs(self.re - o.re) <= atol) and np.all(np.abs(self.im - o.im) <= atol))


def _coerce(v) -> ParaComplex:
    if isinstance(v, ParaComplex):
        return v
    return ParaComplex(v, 0.0 * np.asarray(v) if isinstance(v, np.ndarray) else 0.0)


ONE = ParaComplex(1.0, 0.0)
IPRIME = ParaComplex(0.0, 1.0)
L = ParaComplex(0.5, 0.5)
LBAR = ParaComplex(0.5, -0.5)


def mul(a: ParaComplex, b: ParaComplex) -> ParaComplex:
    return ParaComplex(a.re * b.re + a.im * b.im, a.re * b.im + a.im * b.re)


def sqrt(z: ParaComplex) -> ParaComplex:
    """Square root w with w*w = z.

    A root exists iff re+im >= 0 and re-im >= 0. Of the (up to four)
    roots we return the one whose null components are both nonnegative,
    which has w.re >= 0; at the tie w.re = 0 it is w = 0.
    """
    a = np.asarray(z.lpart, dtype=float)
    b = np.asarray(z.lbarpart, dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise NoRoot(f"no para-complex root of {z}: needs re+im >= 0 and re-im >= 0")
    w = ParaComplex.from_null(np.sqrt(a), np.sqrt(b))
    if w.re.ndim == 0:
        return ParaComplex(float(w.re), float(w.im))
    return w


def exp(z: ParaComplex) -> ParaComplex:
    e = np.exp(z.re)
    return ParaComplex(e * np.cosh(z.im), e * np.sinh(z.im))


def inverse(z: ParaComplex) -> ParaComplex:
    # exact test, no epsilon band
    n = z.norm2()
    if np.any(np.asarray(n) == 0):
        raise NotInvertible(f"{z} is a zero divisor (re^2 = im^2)")
    return ParaComplex(z.re / n, -z.im / n)


@dataclass(frozen=True)
class ParaComplexGrid:
    """Samples of a para-complex function on a rectangular (x, y) grid."""
    xs: np.ndarray
    ys: np.ndarray
    values: ParaComplex  # arrays of shape (len(xs), len(ys))


def pc_partials(
    F: Union[Callable[[Real, Real], ParaComplex], ParaComplexGrid],
    point: Tuple[float, float],
    step: float = 1e-5,
    bounds: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None,
) -> Tuple[ParaComplex, ParaComplex]:
    """Central-difference Wirtinger derivatives (dF/dz, dF/dzbar).

    dF/dz = (F_x + i' F_y)/2 and dF/dzbar = (F_x - i' F_y)/2.

    ``F`` is either a callable of (x, y) or a :class:`ParaComplexGrid`. For
    a grid the point must be an interior node and the grid spacing is
    used as the step.
    """
    x, y = point
    if isinstance(F, ParaComplexGrid):
        i = _node_index(F.xs, x)
        j = _node_index(F.ys, y)
        if i is None or j is None or not (0 < i < len(F.xs) - 1 and 0 < j < len(F.ys) - 1):
            raise OutOfGrid(f"{point} is not an interior grid node")
        v = F.values
        hx = F.xs[i + 1] - F.xs[i - 1]
        hy = F.ys[j + 1] - F.ys[j - 1]
        Fx = ParaComplex((v.re[i + 1, j] - v.re[i - 1, j]) / hx, (v.im[i + 1, j] - v.im[i - 1, j]) / hx)
        Fy = ParaComplex((v.re[i, j + 1] - v.re[i, j - 1]) / hy, (v.im[i, j + 1] - v.im[i, j - 1]) / hy)
    else:
        if bounds is not None:
            (x0, x1), (y0, y1) = bounds
            if not (x0 <= x - step and x + step <= x1 and y0 <= y - step and y + step <= y1):
                raise OutOfGrid(f"{point} with step {step} leaves the domain {bounds}")
        Fx = (F(x + step, y) - F(x - step, y)) / (2 * step)
        Fy = (F(x, y + step) - F(x, y - step)) / (2 * step)
    iFy = mul(IPRIME, Fy)
    return (Fx + iFy) / 2, (Fx - iFy) / 2


def _node_index(nodes: np.ndarray, value: float) -> Optional[int]:
    k = int(np.argmin(np.abs(nodes - value)))
    spacing = np.min(np.diff(nodes)) if len(nodes) > 1 else 1.0
    if abs(nodes[k] - value) > 1e-9 * max(1.0, spacing):
        return None
    return k
