"""CSV readers, scalar-function parsing and mesh writers."""
from __future__ import annotations

import csv
import os
from typing import Callable, Optional, Sequence

import numpy as np
import sympy
from scipy.interpolate import CubicSpline

from .curves import SampledCurve
from .errors import ValidationError

CURVE_COLUMNS = ("s", "x1", "x2", "x3")
MINK_CURVE_COLUMNS = ("s", "v_t", "v_x", "v_y")
RULING_COLUMNS = ("s", "B1", "B2", "B3")

MESH_HEADER = ("Nil3 coordinates (x1, x2, x3) written as Euclidean R^3 positions; "
               "exp is a global diffeomorphism onto R^3")


def read_columns(path, columns: Sequence[str]) -> np.ndarray:
    """Numeric table with an exact header match, rows in file order."""
    if not os.path.isfile(path):
        raise ValidationError(f"input file not found: {path}")
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise ValidationError(f"{path}: empty file")
    header = tuple(c.strip() for c in rows[0])
    if header != tuple(columns):
        raise ValidationError(f"{path}: expected header {','.join(columns)}, got {','.join(header)}")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ValidationError(f"{path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != len(columns):
        raise ValidationError(f"{path}: ragged or empty table")
    if np.any(np.diff(data[:, 0]) <= 0):
        raise ValidationError(f"{path}: s must be strictly increasing")
    return data


def read_curve_csv(path, columns: Sequence[str] = CURVE_COLUMNS) -> SampledCurve:
    data = read_columns(path, columns)
    return SampledCurve(data[:, 0], data[:, 1:])


def read_mink_curve_csv(path) -> SampledCurve:
    return read_curve_csv(path, MINK_CURVE_COLUMNS)


def read_ruling_csv(path) -> SampledCurve:
    return read_curve_csv(path, RULING_COLUMNS)


class ScalarFunction:
    """Callable scalar function with an optional ``derivative``."""

    def __init__(self, fn: Callable, derivative: Optional[Callable] = None, text: str = ""):
        self._fn = fn
        self.derivative = derivative
        self.text = text

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(np.asarray(self._fn(s), dtype=float), s.shape).copy()

    def __repr__(self):
        return f"ScalarFunction({self.text!r})"


def read_scalar_csv(path, name: str) -> ScalarFunction:
    data = read_columns(path, ("s", name))
    if len(data) < 4:
        raise ValidationError(f"{path}: need at least 4 samples")
    spline = CubicSpline(data[:, 0], data[:, 1], bc_type="not-a-knot")
    return ScalarFunction(spline, spline.derivative(1), f"csv:{path}")


def parse_function(text, var: str = "s", name: str = "k1"):
    """Constant, ``csv:<path>`` (columns var,name) or a sympy expression in ``var``."""
    if not isinstance(text, str):
        return float(text)
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        pass
    if text.startswith("csv:") or text.endswith(".csv"):
        return read_scalar_csv(text[4:] if text.startswith("csv:") else text, name)
    sym = sympy.Symbol(var)
    try:
        expr = sympy.sympify(text, locals={var: sym})
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValidationError(f"cannot parse function {text!r}") from exc
    extra = expr.free_symbols - {sym}
    if extra:
        raise ValidationError(f"unexpected symbols in {text!r}: {sorted(map(str, extra))}")
    fn = sympy.lambdify(sym, expr, "numpy")
    dfn = sympy.lambdify(sym, sympy.diff(expr, sym), "numpy")
    return ScalarFunction(fn, ScalarFunction(dfn, text=f"d/d{var}({text})"), text)


# ------------------------------------------------------------------ meshes

def mesh_csv(s_values, t_values, points) -> str:
    """Rows s,t,x1,x2,x3 with s outer, t inner; repr floats (round-trip exact)."""
    lines = ["s,t,x1,x2,x3"]
    for i, s in enumerate(s_values):
        for j, t in enumerate(t_values):
            p = points[i, j]
            lines.append(",".join(repr(float(v)) for v in (s, t, p[0], p[1], p[2])))
    return "\n".join(lines) + "\n"


def mesh_obj(points, name: str = "surface") -> str:
    """Regular quad grid OBJ, 9 significant digits."""
    ns, nt = points.shape[:2]
    lines = [f"# {MESH_HEADER}", f"o {name}"]
    for p in points.reshape(-1, 3):
        lines.append("v " + " ".join(f"{float(v):.9g}" for v in p))
    for i in range(ns - 1):
        for j in range(nt - 1):
            a = i * nt + j + 1
            lines.append(f"f {a} {a + nt} {a + nt + 1} {a + 1}")
    return "\n".join(lines) + "\n"


def write_mesh(path, s_values, t_values, points, fmt: str = "obj", name: str = "surface") -> None:
    points = np.asarray(points, dtype=float)
    text = mesh_obj(points, name) if fmt == "obj" else mesh_csv(s_values, t_values, points)
    with open(path, "w", newline="") as fh:
        fh.write(text)
