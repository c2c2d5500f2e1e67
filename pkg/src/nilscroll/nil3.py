"""Heisenberg group Nil3 with the left-invariant Lorentzian metric.

Points and tangent vectors are numpy arrays with a trailing axis of
length 3. Tangent vectors are stored in the left-invariant orthonormal
frame E1 (timelike), E2, E3 unless a function says otherwise.
"""
from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

ETA = np.diag([-1.0, 1.0, 1.0])
E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def _arr(v) -> np.ndarray:
    return np.asarray(v, dtype=float)


def group_mul(p, q) -> np.ndarray:
    p, q = _arr(p), _arr(q)
    x1, x2, x3 = p[..., 0], p[..., 1], p[..., 2]
    y1, y2, y3 = q[..., 0], q[..., 1], q[..., 2]
    return np.stack([x1 + y1, x2 + y2, x3 + y3 + 0.5 * (x1 * y2 - x2 * y1)], axis=-1)


def group_inv(p) -> np.ndarray:
    return -_arr(p)


def identity() -> np.ndarray:
    return np.zeros(3)


def lie_exp(v) -> np.ndarray:
    """exp(v1 e1 + v2 e2 + v3 e3) = (v1, v2, v3)."""
    return _arr(v).copy()


def lie_log(p) -> np.ndarray:
    return _arr(p).copy()


def metric(v, w) -> np.ndarray:
    v, w = _arr(v), _arr(w)
    return -v[..., 0] * w[..., 0] + v[..., 1] * w[..., 1] + v[..., 2] * w[..., 2]


def cross(v, w) -> np.ndarray:
    """Lorentzian vector product: g(cross(v, w), z) = det[v | w | z]."""
    v, w = _arr(v), _arr(w)
    v1, v2, v3 = v[..., 0], v[..., 1], v[..., 2]
    w1, w2, w3 = w[..., 0], w[..., 1], w[..., 2]
    return np.stack([-(v2 * w3 - v3 * w2), v3 * w1 - v1 * w3, v1 * w2 - v2 * w1], axis=-1)


# GAMMA[i, j] = frame components of nabla_{E_i} E_j
GAMMA = np.zeros((3, 3, 3))
GAMMA[0, 1] = [0.0, 0.0, 0.5]
GAMMA[0, 2] = [0.0, -0.5, 0.0]
GAMMA[1, 0] = [0.0, 0.0, -0.5]
GAMMA[1, 2] = [-0.5, 0.0, 0.0]
GAMMA[2, 0] = [0.0, -0.5, 0.0]
GAMMA[2, 1] = [-0.5, 0.0, 0.0]


def connection(X, Y) -> np.ndarray:
    """Algebraic part of nabla_X Y for frame-constant coefficients."""
    return np.einsum("...i,...j,ijk->...k", _arr(X), _arr(Y), GAMMA)


def to_frame(p, v) -> np.ndarray:
    """Coordinate velocity v at point p -> frame components."""
    p, v = _arr(p), _arr(v)
    return np.stack(
        [v[..., 0], v[..., 1], v[..., 2] + 0.5 * (p[..., 1] * v[..., 0] - p[..., 0] * v[..., 1])],
        axis=-1,
    )


def from_frame(p, a) -> np.ndarray:
    """Frame components a at point p -> coordinate velocity."""
    p, a = _arr(p), _arr(a)
    return np.stack(
        [a[..., 0], a[..., 1], a[..., 2] - 0.5 * (p[..., 1] * a[..., 0] - p[..., 0] * a[..., 1])],
        axis=-1,
    )


def left_translate_velocity(gamma, s, h: float = 1e-5) -> np.ndarray:
    """Frame components of gamma^{-1} dgamma/ds.

    ``gamma`` is a :class:`~nilscroll.curves.VectorCurve` (its own
    derivative is used) or any callable s -> point, differentiated by
    central differences.
    """
    s = _arr(s)
    if hasattr(gamma, "d1") and hasattr(gamma, "value"):
        return to_frame(gamma.value(s), gamma.d1(s))
    dg = (_arr(gamma(s + h)) - _arr(gamma(s - h))) / (2 * h)
    return to_frame(gamma(s), dg)


def covariant_derivative(
    X: Callable[..., np.ndarray],
    velocity: Callable[..., np.ndarray],
    point: Sequence[float],
    direction: int,
    h: float = 1e-5,
) -> np.ndarray:
    """nabla_{d/du_direction} X along a parametrized map.

    ``X`` and ``velocity`` are callables of the map parameters returning
    frame components; ``velocity`` is the map's partial derivative in
    ``direction``. The frame derivative of X is taken by central
    differences.
    """
    point = [float(c) for c in point]
    up = list(point)
    dn = list(point)
    up[direction] += h
    dn[direction] -= h
    dX = (_arr(X(*up)) - _arr(X(*dn))) / (2 * h)
    return dX + connection(velocity(*point), X(*point))


def covariant_derivative_from(dX, V, X) -> np.ndarray:
    """nabla_V X given the frame-component derivative dX along V."""
    return _arr(dX) + connection(V, X)


def frame_derivative_of_coordinate_field(p, v, dp, dv) -> np.ndarray:
    """Derivative of to_frame(p, v) when p, v move with rates dp, dv."""
    p, v, dp, dv = map(_arr, (p, v, dp, dv))
    return np.stack(
        [
            dv[..., 0],
            dv[..., 1],
            dv[..., 2]
            + 0.5 * (dp[..., 1] * v[..., 0] + p[..., 1] * dv[..., 0] - dp[..., 0] * v[..., 1] - p[..., 0] * dv[..., 1]),
        ],
        axis=-1,
    )


def det3(v, w, z) -> np.ndarray:
    return np.linalg.det(np.stack([_arr(v), _arr(w), _arr(z)], axis=-1))
