"""Shared null-frame ODE machinery.

A frame is stored as a 3x3 matrix whose columns are A, B, C. The
system A' = k1 C, B' = k2 C, C' = -k2 A - k1 B reads F' = F K(s) with
K = [[0, 0, -k2], [0, 0, -k1], [k1, k2, 0]]. The same equations govern
null frames in Minkowski space and in Nil3 (frame components), so both
modules integrate through here.
"""
from __future__ import annotations

import math

import numpy as np

from .curves import eval_scalar
from .errors import BadInitialFrame, ValidationError

ETA = np.diag([-1.0, 1.0, 1.0])
GRAM0 = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
_R2 = 1.0 / math.sqrt(2.0)
F0 = np.array([
    [-_R2, _R2, 0.0],
    [_R2, _R2, 0.0],
    [0.0, 0.0, 1.0],
])
# same A0, B0 with C0 = A0 x B0; scrolls built from a frame are minimal
# only for this orientation
F0_ORIENTED = F0 @ np.diag([1.0, 1.0, -1.0])


def orientation(F: np.ndarray) -> float:
    """+1 when C = A x B (det > 0), -1 otherwise."""
    return float(np.sign(np.linalg.det(np.asarray(F, dtype=float))))


def gram(F: np.ndarray) -> np.ndarray:
    """Pairings of the frame columns, F^T eta F (works on stacks)."""
    return np.swapaxes(F, -1, -2) @ ETA @ F


def gram_drift(F: np.ndarray) -> float:
    return float(np.max(np.abs(gram(F) - GRAM0)))


def check_initial_frame(F: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    if F.shape != (3, 3):
        raise BadInitialFrame(f"initial frame must be 3x3, got {F.shape}")
    err = gram_drift(F)
    if err > tol:
        raise BadInitialFrame(f"initial frame violates null-frame pairings by {err:.3e}")
    return F


def _kmat(k1: np.ndarray, k2: np.ndarray) -> np.ndarray:
    K = np.zeros(np.shape(k1) + (3, 3))
    K[..., 0, 2] = -k2
    K[..., 1, 2] = -k1
    K[..., 2, 0] = k1
    K[..., 2, 1] = k2
    return K


def make_grid(span, step: float, s0: float) -> tuple[np.ndarray, int]:
    """Nodes covering ``span`` and containing ``s0``; returns (nodes, index of s0)."""
    a, b = float(span[0]), float(span[1])
    if not (a <= s0 <= b) or b <= a:
        raise ValidationError(f"span {span} must be increasing and contain s0={s0}")
    if step <= 0:
        raise ValidationError("step must be positive")
    nb = int(math.ceil((s0 - a) / step - 1e-9))
    nf = int(math.ceil((b - s0) / step - 1e-9))
    back = s0 - (s0 - a) * np.arange(nb, 0, -1) / nb if nb else np.empty(0)
    fwd = s0 + (b - s0) * np.arange(1, nf + 1) / nf if nf else np.empty(0)
    return np.concatenate([back, [s0], fwd]), nb


def rk4_frame(k1, k2, init: np.ndarray, span, step: float = 1e-3, s0: float = 0.0):
    """Classical RK4 for F' = F K(s) from F(s0) = init.

    Returns (nodes, frames of shape (n, 3, 3), index of s0). No
    re-orthonormalization is applied, so the Gram drift measures the
    integrator.
    """
    init = check_initial_frame(init)
    s, i0 = make_grid(span, step, s0)
    mids = 0.5 * (s[:-1] + s[1:])
    K_nodes = _kmat(eval_scalar(k1, s), eval_scalar(k2, s))
    K_mids = _kmat(eval_scalar(k1, mids), eval_scalar(k2, mids))
    out = np.empty((len(s), 3, 3))
    out[i0] = init
    for i in range(i0, len(s) - 1):
        out[i + 1] = _step(out[i], s[i + 1] - s[i], K_nodes[i], K_mids[i], K_nodes[i + 1])
    for i in range(i0, 0, -1):
        out[i - 1] = _step(out[i], s[i - 1] - s[i], K_nodes[i], K_mids[i - 1], K_nodes[i - 1])
    return s, out, i0


def _step(F, h, Ka, Km, Kb):
    a = F @ Ka
    b = (F + 0.5 * h * a) @ Km
    c = (F + 0.5 * h * b) @ Km
    d = (F + h * c) @ Kb
    return F + h / 6.0 * (a + 2 * b + 2 * c + d)
