"""Command-line front end: construct, verify, examples.

Exit codes: 0 success, 1 verification failed, 2 invalid input,
3 domain error (invalid chart, degenerate metric, ...).
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import jobs
from .errors import DomainError, ValidationError

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_DOMAIN = 0, 1, 2, 3


def _range(text: str):
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a:b, got {text!r}") from exc
    return [a, b]


def _grid(text: str):
    try:
        s_part, t_part = text.split(",")
        axes = []
        for part in (s_part, t_part):
            a, b, n = part.split(":")
            axes.append([float(a), float(b), int(n)])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected s0:s1:ns,t0:t1:nt, got {text!r}") from exc
    return {"s": axes[0], "t": axes[1]}


def _tol(text: str):
    name, _, value = text.partition("=")
    try:
        return name, float(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}") from exc


def _vec3(text: str):
    try:
        c = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected c1,c2,c3, got {text!r}") from exc
    if len(c) != 3:
        raise argparse.ArgumentTypeError("expected three components")
    return c


def _scroll_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON job file; flags override its entries")
    p.add_argument("--branch", choices=jobs.BRANCHES)
    p.add_argument("--ruling", help="circle | hyperbola | parabola | constant | csv:<path>")
    p.add_argument("--c", type=_vec3, help="direction c1,c2,c3 for the constant ruling")
    p.add_argument("--scale", help="scale function of s for the constant ruling")
    p.add_argument("--b", help="free function b (constant, expression in s, or csv:<path>)")
    p.add_argument("--alpha", help="nowhere-zero function alpha (constant, expression in s, or csv:<path>)")
    p.add_argument("--k1", help="first curvature (constant, expression in s, or csv:<path>)")
    p.add_argument("--S", dest="S", help="AR coefficient S(x)")
    p.add_argument("--p", help="chart function p(x)")
    p.add_argument("--q", help="chart function q(y)")
    p.add_argument("--x-range", dest="x_range", type=_range)
    p.add_argument("--y-range", dest="y_range", type=_range)
    p.add_argument("--span", type=_range, help="curve parameter span a:b")
    p.add_argument("--step", type=float)
    p.add_argument("--grid", type=_grid, help="s0:s1:ns,t0:t1:nt")
    p.add_argument("--report", help="VerificationReport JSON path")
    p.add_argument("--tol", type=_tol, nargs="+", default=None, metavar="NAME=VALUE")
    p.add_argument("--junit", help="JUnit XML summary path")
    p.add_argument("--perturb", type=float, help="reparametrize the ruling by 1 + eps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilscroll", description="Minimal null scrolls in Nil3")
    sub = parser.add_subparsers(dest="command", required=True)
    pc = sub.add_parser("construct", help="build a scroll, write a mesh and a report")
    _scroll_options(pc)
    pc.add_argument("--out", help="mesh path")
    pc.add_argument("--format", choices=("obj", "csv"))
    pv = sub.add_parser("verify", help="verify a scroll; exit 1 if any check fails")
    _scroll_options(pv)
    pe = sub.add_parser("examples", help="write meshes of the example figures")
    pe.add_argument("name", help=f"{' | '.join(jobs.FIGURES)} | all")
    pe.add_argument("--outdir", default=".")
    pe.add_argument("--format", choices=("obj", "csv"), default="obj")
    return parser


def config_from_args(args: argparse.Namespace) -> dict:
    config = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
    for key, value in vars(args).items():
        if key == "config" or value is None:
            continue
        config[key] = dict(value) if key == "tol" else value
    return jobs.validate_config(config)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        if config["command"] == "examples":
            for path in jobs.run_examples(config["name"], config.get("outdir", "."), config.get("format", "obj")):
                print(path)
            return EXIT_OK
        if config["command"] == "construct":
            rep = jobs.run_construct(config)
            print(rep.to_json())
            return EXIT_OK
        reports = jobs.run_verify(config)
        for rep in reports:
            print(rep.to_json())
        return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
