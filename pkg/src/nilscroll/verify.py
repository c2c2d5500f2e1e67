"""Finite-difference verification of closed-form claims.

All tolerances live in ``TOLERANCES``; reports derive pass flags from
residuals and that table only.
"""
from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from . import fdgeom
from .construct import example_gallery, gallery_deviation
from .errors import DegeneratePoint, TooFewPoints
from .minkowski import MinkNullFrame
from .scroll import NullScroll, fundamental_data, g12_polynomial

TOLERANCES: Dict[str, float] = {
    "H_closed": 1e-8,
    "H_fd": 1e-4,
    "Q_conj": 1e-4,
    "gram_drift": 1e-8,
    "gallery": 1e-9,
    "planarity": 1e-8,
    "correspondence": 1e-6,
    "liouville": 1e-5,
    "ar": 1e-6,
    "support": 1e-5,
    "closedness": 1e-8,
    "path": 1e-7,
    "mask_g12": 1e-2,
}

# FD H error shrinks like h^2 only while truncation dominates roundoff
CONVERGENCE_STEPS = (2e-2, 1e-2)


def tolerance_table(overrides: Optional[Dict[str, float]] = None) -> Dict[str, float]:
    table = dict(TOLERANCES)
    for k, v in (overrides or {}).items():
        if k not in table:
            raise KeyError(f"unknown tolerance {k!r}")
        table[k] = float(v)
    return table


@dataclass
class VerificationReport:
    name: str
    grid: dict
    mask_fraction: float
    residuals: Dict[str, Dict[str, float]] = field(default_factory=dict)
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(TOLERANCES))
    meta: dict = field(default_factory=dict)

    def add(self, key: str, values) -> None:
        v = np.abs(np.asarray(values, dtype=float)).ravel()
        if v.size == 0:
            self.residuals[key] = {"max": float("nan"), "mean": float("nan")}
        else:
            self.residuals[key] = {"max": float(np.max(v)), "mean": float(np.mean(v))}

    @property
    def pass_flags(self) -> Dict[str, bool]:
        vacuous = self.mask_fraction >= 1.0
        out = {}
        for key, r in self.residuals.items():
            tol = self.tolerances.get(key)
            if tol is None:
                continue
            m = r["max"]
            out[key] = (not vacuous) and bool(np.isfinite(m)) and m <= tol
        return out

    @property
    def passed(self) -> bool:
        flags = self.pass_flags
        return bool(flags) and all(flags.values())

    def to_dict(self) -> dict:
        return {"name": self.name, "grid": self.grid, "maskFraction": self.mask_fraction,
                "residuals": self.residuals, "pass": self.pass_flags, "passed": self.passed,
                "meta": self.meta}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def write_json(reports: Sequence[VerificationReport], path) -> None:
    data = [r.to_dict() for r in reports]
    with open(path, "w") as fh:
        json.dump(data[0] if len(data) == 1 else data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def junit_xml(reports: Sequence[VerificationReport]) -> str:
    """JUnit-style summary: one testcase per (report, residual)."""
    cases = [(r, k, ok) for r in reports for k, ok in r.pass_flags.items()]
    suite = ET.Element("testsuite", name="nilscroll", tests=str(len(cases)),
                       failures=str(sum(not ok for _, _, ok in cases)))
    for r, key, ok in cases:
        case = ET.SubElement(suite, "testcase", classname=r.name, name=key)
        if not ok:
            res = r.residuals[key]
            ET.SubElement(case, "failure", message=f"max {res['max']:.3e} > tol {r.tolerances[key]:.1e}")
    return ET.tostring(suite, encoding="unicode")


def write_junit(reports: Sequence[VerificationReport], path) -> None:
    with open(path, "w") as fh:
        fh.write(junit_xml(reports) + "\n")


# ------------------------------------------------------------ operations

def fd_mean_curvature(surface, s, t, steps=(fdgeom.FD_STEP1, fdgeom.FD_STEP2)) -> np.ndarray:
    """Mean curvature of any map (s, t) -> Nil3 from finite differences
    and the connection table alone."""
    geo = fdgeom.surface_geometry(surface, s, t, steps[0], steps[1])
    if np.any(~np.isfinite(geo.det)) or np.any(geo.det == 0):
        raise DegeneratePoint("induced metric degenerate on the grid")
    return geo.H


def q_lbar_factor(surface, s, t, steps=(fdgeom.FD_STEP1, fdgeom.FD_STEP2)) -> np.ndarray:
    """((2H + 1)/4) g(nabla_t f_t, N) - (f_t)_3^2 / 4 by finite differences.

    The ruling direction f_t is null, so in any null chart with t_x free
    the lbar part of Q equals t_y^2 times this factor. It vanishes
    exactly when Q conj(Q) = 0 with Q a multiple of l."""
    geo = fdgeom.surface_geometry(surface, s, t, steps[0], steps[1])
    return (2 * geo.H + 1) / 4 * geo.N - geo.Xv[..., 2] ** 2 / 4


def _grid(f: NullScroll, grid, n: int):
    if grid is None:
        (s0, s1), (t0, t1) = f.domain
        return np.linspace(s0, s1, n), np.linspace(t0, t1, n)
    s_values, t_values = grid
    return np.asarray(s_values, dtype=float), np.asarray(t_values, dtype=float)


def _grid_meta(s_values, t_values) -> dict:
    return {"s": [float(s_values[0]), float(s_values[-1]), int(len(s_values))],
            "t": [float(t_values[0]), float(t_values[-1]), int(len(t_values))]}


def verify_minimal(f: NullScroll, grid=None, tolerances: Optional[Dict[str, float]] = None,
                   n: int = 21, surface=None) -> VerificationReport:
    """Closed-form and FD mean curvature on the grid, masking points with
    |g12| below the conditioning threshold. ``surface`` overrides the map
    that is differentiated (defaults to the scroll itself)."""
    tol = tolerance_table(tolerances)
    s_values, t_values = _grid(f, grid, n)
    S, T = np.meshgrid(s_values, t_values, indexing="ij")
    g12 = g12_polynomial(f, S, T)
    mask = np.isfinite(g12) & (np.abs(g12) >= tol["mask_g12"])
    rep = VerificationReport(f.name, _grid_meta(s_values, t_values), float(1.0 - mask.mean()), tolerances=tol)
    Sm, Tm = S[mask], T[mask]
    if Sm.size:
        rep.add("H_closed", fundamental_data(f, Sm, Tm, strict=False).H)
        rep.add("H_fd", fd_mean_curvature(surface or f.eval, Sm, Tm))
        rep.add("Q_conj", q_lbar_factor(surface or f.eval, Sm, Tm))
    else:
        rep.add("H_closed", [])
        rep.add("H_fd", [])
        rep.add("Q_conj", [])
    if f.frame is not None:
        rep.add("gram_drift", [f.frame.gram_drift()])
    return rep


def verify_planarity(points) -> float:
    """Max distance from the least-squares plane in coordinate R^3."""
    P = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(P) < 4:
        raise TooFewPoints("planarity needs at least 4 points")
    Q = P - P.mean(axis=0)
    normal = np.linalg.svd(Q, full_matrices=False)[2][-1]
    return float(np.max(np.abs(Q @ normal)))


def _lift_integral(frame: MinkNullFrame, s: float) -> float:
    A = frame.curve("A")
    g = frame.gamma

    def fn(u):
        gv, av = g.value(u), A.value(u)
        return -0.5 * gv[1] * av[0] + 0.5 * gv[0] * av[1]

    return quad(fn, 0.0, s, epsabs=1e-13, epsrel=1e-13, limit=200)[0]


def verify_correspondence(mframe: MinkNullFrame, nil_scroll: NullScroll, grid=None, n: int = 21,
                          tolerances: Optional[Dict[str, float]] = None) -> VerificationReport:
    """Compare a lifted scroll with the component formulas
    f1 = gamma1 + t B1, f2 = gamma2 + t B2,
    f3 = gamma3 + int_0^s (-gamma2 A1 + gamma1 A2)/2 + t (-B3 - gamma2 B1/2 + gamma1 B2/2)
    built directly from the Minkowski frame data (quadrature independent
    of the lift's own cumulative rule)."""
    tol = tolerance_table(tolerances)
    s_values, t_values = _grid(nil_scroll, grid, n)
    S, T = np.meshgrid(s_values, t_values, indexing="ij")
    g = mframe.gamma.value(s_values)
    B = mframe.curve("B").value(s_values)
    I = np.array([_lift_integral(mframe, float(s)) for s in s_values])
    g, B, I = g[:, None, :], B[:, None, :], I[:, None]
    f1 = g[..., 0] + T * B[..., 0]
    f2 = g[..., 1] + T * B[..., 1]
    f3 = g[..., 2] + I + T * (-B[..., 2] - 0.5 * g[..., 1] * B[..., 0] + 0.5 * g[..., 0] * B[..., 1])
    got = nil_scroll.eval(S, T)
    rep = VerificationReport(f"correspondence:{nil_scroll.name}", _grid_meta(s_values, t_values), 0.0,
                             tolerances=tol)
    rep.add("correspondence", np.stack([got[..., 0] - f1, got[..., 1] - f2, got[..., 2] - f3]))
    return rep


def verify_gallery(name: str, f: NullScroll, n: int = 41, tolerances: Optional[Dict[str, float]] = None,
                   **params) -> VerificationReport:
    """Minimality report plus aligned deviation from the closed form."""
    rep = verify_minimal(f, tolerances=tolerances, n=n)
    g = example_gallery(name, **params)
    rep.add("gallery", [gallery_deviation(f, g, n=n)])
    rep.name = f"gallery:{g.name}"
    return rep


def convergence_ratio(f: NullScroll, grid=None, steps: Iterable[float] = CONVERGENCE_STEPS, n: int = 11,
                      surface=None) -> float:
    """Ratio of max |H_fd - H_closed| at step h over step h/2 (both FD
    steps set to h). Second-order differences give about 4."""
    s_values, t_values = _grid(f, grid, n)
    S, T = np.meshgrid(s_values, t_values, indexing="ij")
    H0 = fundamental_data(f, S, T, strict=False).H
    errs = [float(np.max(np.abs(fd_mean_curvature(surface or f.eval, S, T, (h, h)) - H0))) for h in steps]
    return errs[0] / errs[1]
