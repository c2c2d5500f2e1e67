"""Job configuration, scroll building and reports behind the CLI."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import jsonschema
import numpy as np

from . import construct as C
from . import io, verify
from .curves import eval_scalar
from .errors import UnknownName, ValidationError
from .scroll import NullScroll, abresch_rosenberg, g12_polynomial, support_function

BRANCHES = ("beta-zero", "beta-half", "tangent", "curvature", "ar-data")
_FUNC = {"type": ["number", "string"]}
_RANGE = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_AXIS = {"type": "array", "prefixItems": [{"type": "number"}, {"type": "number"}, {"type": "integer", "minimum": 2}],
         "minItems": 3, "maxItems": 3}

JOB_SCHEMA = {
    "type": "object",
    "properties": {
        "command": {"enum": ["construct", "verify", "examples"]},
        "branch": {"enum": list(BRANCHES)},
        "ruling": {"type": "string", "pattern": "^(circle|hyperbola|parabola|constant|csv:.+)$"},
        "c": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        "scale": _FUNC,
        "k": _FUNC,
        "b": _FUNC,
        "alpha": _FUNC,
        "k1": _FUNC,
        "S": _FUNC,
        "p": _FUNC,
        "q": _FUNC,
        "x_range": _RANGE,
        "y_range": _RANGE,
        "span": _RANGE,
        "step": {"type": "number", "exclusiveMinimum": 0},
        "grid": {"type": "object", "properties": {"s": _AXIS, "t": _AXIS}, "required": ["s", "t"],
                 "additionalProperties": False},
        "out": {"type": "string"},
        "format": {"enum": ["obj", "csv"]},
        "report": {"type": "string"},
        "junit": {"type": "string"},
        "tol": {"type": "object", "additionalProperties": {"type": "number"}},
        "perturb": {"type": "number"},
        "name": {"type": "string"},
        "outdir": {"type": "string"},
    },
    "required": ["command"],
    "additionalProperties": False,
}

# figure name -> (gallery key, params)
FIGURES = {
    "horizontal-umbrella": ("horizontal_umbrella", {}),
    "vertical-plane": ("vertical_plane", {}),
    "circle": ("circle", {}),
    "hyperbola": ("hyperbola", {}),
    "parabola": ("parabola", {"b": 0.0}),
}


def validate_config(config: dict) -> dict:
    try:
        jsonschema.validate(config, JOB_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ValidationError(f"invalid job config: {exc.message}") from exc
    cmd = config["command"]
    if cmd in ("construct", "verify") and "branch" not in config:
        raise ValidationError(f"{cmd} needs a branch")
    if cmd == "examples" and "name" not in config:
        raise ValidationError("examples needs a figure name")
    if config.get("branch") in ("beta-zero", "beta-half", "tangent") and "ruling" not in config:
        raise ValidationError(f"branch {config['branch']} needs a ruling")
    unknown = sorted(set(config.get("tol", {})) - set(verify.TOLERANCES))
    if unknown:
        raise ValidationError(f"unknown tolerance names: {', '.join(unknown)}")
    return config


def thread_count() -> int:
    raw = os.environ.get("NILSCROLL_THREADS")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValidationError("NILSCROLL_THREADS must be a positive integer") from exc
    if n < 1:
        raise ValidationError("NILSCROLL_THREADS must be a positive integer")
    return n


def ruling_spec(config: dict) -> C.RulingSpec:
    text = config["ruling"]
    if text.startswith("csv:"):
        return C.RulingSpec("sampled", curve_data=io.read_ruling_csv(text[4:]))
    if text == "constant":
        c = tuple(config.get("c", (1.0, 0.5, math.sqrt(3) / 2)))
        scale = io.parse_function(config["scale"], "s", "scale") if "scale" in config else None
        k = io.parse_function(config["k"], "s", "k") if "k" in config else None
        return C.RulingSpec("constant", c=c, scale=scale, k=k)
    return C.RulingSpec(text)


def build_scroll(config: dict) -> NullScroll:
    """Construct the scroll described by a validated config."""
    branch = config["branch"]
    span = tuple(config.get("span", C.DEFAULT_SPAN))
    step = float(config.get("step", C.DEFAULT_STEP))
    if branch == "beta-zero":
        f = C.construct_beta_zero(ruling_spec(config), io.parse_function(config.get("alpha", 1.0), "s", "alpha"),
                                  span, step)
    elif branch == "beta-half":
        f = C.construct_beta_half(ruling_spec(config), io.parse_function(config.get("b", 0.0), "s", "b"),
                                  span, step, name=f"beta-half-{config['ruling']}")
    elif branch == "tangent":
        f = C.construct_tangent(ruling_spec(config), io.parse_function(config.get("alpha", 1.0), "s", "alpha"),
                                span, step)
    elif branch == "curvature":
        f = C.construct_from_curvature(io.parse_function(config.get("k1", 0.0), "s", "k1"), span, step)
    else:
        S = io.parse_function(config.get("S", 0.0), "x", "S")
        p = io.parse_function(config.get("p", "x/8"), "x", "p")
        q = io.parse_function(config.get("q", "1/y"), "y", "q")
        px = getattr(p, "derivative", None) or 0.0
        qy = getattr(q, "derivative", None) or 0.0
        f = C.construct_from_ar_data(S, p, q, tuple(config.get("x_range", (-1.0, 1.0))),
                                     tuple(config.get("y_range", (0.5, 2.0))), px=px, qy=qy, step=step)
    if config.get("perturb"):
        f = C.perturb_ruling(f, float(config["perturb"]))
    return f


def grid_axes(f: NullScroll, config: dict, n: int = 41):
    if "grid" in config:
        (s0, s1, ns), (t0, t1, nt) = config["grid"]["s"], config["grid"]["t"]
        return np.linspace(s0, s1, int(ns)), np.linspace(t0, t1, int(nt))
    (s0, s1), (t0, t1) = f.domain
    return np.linspace(s0, s1, n), np.linspace(t0, t1, n)


def chart_residuals(f: NullScroll, rep: verify.VerificationReport, n: int = 41) -> None:
    """Support function and Abresch-Rosenberg checks in the attached chart,
    on points where |g12| passes the conditioning mask."""
    chart = f.chart
    X, Y = np.meshgrid(np.linspace(*chart.x_range, n), np.linspace(*chart.y_range, n), indexing="ij")
    s, t = chart.st(X, Y)
    m = np.abs(g12_polynomial(f, s, t)) >= rep.tolerances["mask_g12"]
    X, Y = X[m], Y[m]
    w = chart.w(X, Y)
    sp = support_function(f, chart, X, Y)
    rep.add("support", np.abs(sp.definitional) - 4 * np.exp(w / 2))
    ar = abresch_rosenberg(f, chart, X, Y).definitional
    if chart.S is not None:
        rep.add("ar", np.stack([ar.lpart - eval_scalar(chart.S, X), ar.lbarpart]))


def report_for(f: NullScroll, config: dict) -> verify.VerificationReport:
    s_values, t_values = grid_axes(f, config)
    rep = verify.verify_minimal(f, (s_values, t_values), config.get("tol"))
    if f.chart is not None:
        chart_residuals(f, rep)
    return rep


def run_construct(config: dict):
    """Build, write the mesh and the report; returns the report."""
    f = build_scroll(config)
    s_values, t_values = grid_axes(f, config)
    S, T = np.meshgrid(s_values, t_values, indexing="ij")
    out = config.get("out", f"{f.name}.{config.get('format', 'obj')}")
    io.write_mesh(out, s_values, t_values, f.eval(S, T), config.get("format", "obj"), f.name)
    rep = report_for(f, config)
    verify.write_json([rep], config.get("report") or os.path.splitext(out)[0] + ".report.json")
    if config.get("junit"):
        verify.write_junit([rep], config["junit"])
    return rep


def run_verify(config: dict) -> List[verify.VerificationReport]:
    reports = [report_for(build_scroll(config), config)]
    if config.get("report"):
        verify.write_json(reports, config["report"])
    if config.get("junit"):
        verify.write_junit(reports, config["junit"])
    return reports


def figure_names(name: str) -> List[str]:
    if name == "all":
        return list(FIGURES)
    if name not in FIGURES:
        raise UnknownName(f"unknown figure {name!r}; choose from {', '.join(FIGURES)} or all")
    return [name]


def write_figure(name: str, outdir: str = ".", fmt: str = "obj", n: int = 41) -> str:
    key, params = FIGURES[name]
    f = C.construct_gallery(key, **params)
    (s0, s1), (t0, t1) = f.domain
    s_values, t_values = np.linspace(s0, s1, n), np.linspace(t0, t1, n)
    S, T = np.meshgrid(s_values, t_values, indexing="ij")
    path = os.path.join(outdir, f"{name}.{fmt}")
    io.write_mesh(path, s_values, t_values, f.eval(S, T), fmt, name)
    return path


def run_examples(name: str, outdir: str = ".", fmt: str = "obj", threads: Optional[int] = None) -> List[str]:
    names = figure_names(name)
    os.makedirs(outdir, exist_ok=True)
    with ThreadPoolExecutor(max_workers=threads or thread_count()) as pool:
        return list(pool.map(lambda nm: write_figure(nm, outdir, fmt), names))
