"""Command-line front end.

    twistsection [--n N] [--seed S] [--format json|text] [--samples N] [--tol-fd X]
    twistsection --dump psi|jacobian|matrixpath|loop [--map F1,2|G1|T1] [--gen K]

Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import TextIO

import numpy as np

from . import charts as ch
from .acceptance import run_all
from .crosshom import derivative_along
from .curve import generator_loop, loop_to_json
from .loopclass import lift_path
from .report import ConfigError, RunConfig
from .smooth import psi_table

DUMP_TARGETS = ("psi", "jacobian", "matrixpath", "loop")


def parse_map(spec: str, config: RunConfig) -> ch.ChartMap:
    """``F1,2`` / ``G1`` / ``T1`` -> the chart map."""
    spec = spec.strip().replace("(", "").replace(")", "")
    kind, args = spec[:1].upper(), spec[1:]
    try:
        idx = [int(a) for a in args.split(",") if a]
    except ValueError:
        raise ConfigError(f"bad map spec {spec!r}") from None
    try:
        if kind == "F" and len(idx) == 2:
            return ch.slide(idx[0], idx[1], config.profile())
        if kind == "G" and len(idx) == 1:
            return ch.flip(idx[0], config.profile())
        if kind == "T" and len(idx) == 1:
            return ch.sphere_twist(idx[0])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"bad map spec {spec!r}; expected F<i>,<j>, G<j> or T<i>")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _writer(out: TextIO):
    return csv.writer(out, lineterminator="\n")


def cmd_dump(what: str, config: RunConfig, cmap: ch.ChartMap, gen: int, out: TextIO) -> None:
    if what == "psi":
        w = _writer(out)
        w.writerow(["r", "psi", "psi_prime"])
        for row in psi_table(config.profile()):
            w.writerow([_fmt(v) for v in row])
    elif what == "loop":
        out.write(loop_to_json(generator_loop(gen, cmap, config.n, config.loop_samples)) + "\n")
    elif what == "jacobian":
        loop = generator_loop(gen, cmap, config.n, config.loop_samples)
        w = _writer(out)
        w.writerow(["t", "x", "y", "z"] + [f"j{r}{c}" for r in range(1, 4) for c in range(1, 4)])
        for piece in loop.pieces():
            jac = ch.jacobian_analytic(cmap, piece.points)
            for t, p, m in zip(piece.params, piece.points, jac):
                w.writerow([_fmt(v) for v in [t, *p, *m.ravel()]])
    elif what == "matrixpath":
        loop = generator_loop(gen, cmap, config.n, config.loop_samples)
        lift = lift_path(derivative_along(cmap, loop, samples=config.path_samples), config.continuity)
        w = _writer(out)
        w.writerow(["t"] + [f"m{r}{c}" for r in range(1, 4) for c in range(1, 4)] + ["qw", "qx", "qy", "qz"])
        for t, m, q in zip(lift.ts, lift.matrices, lift.quaternions):
            w.writerow([_fmt(v) for v in [t, *m.ravel(), *q]])
    else:
        raise ConfigError(f"unknown dump target {what!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistsection", description=__doc__.split("\n\n")[0])
    p.add_argument("--n", type=int, default=3, help="rank of the free group (default 3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--samples", type=int, default=512, help="loop polyline samples (power of two)")
    p.add_argument("--path-samples", type=int, default=256, help="matrix path samples (power of two)")
    p.add_argument("--tol-fd", type=float, default=1e-5)
    p.add_argument("--plateau-end", type=float, default=1.0 / 3.0)
    p.add_argument("--support-end", type=float, default=0.6)
    p.add_argument("--dump", choices=DUMP_TARGETS)
    p.add_argument("--map", default=None, help="map for dumps: F<i>,<j>, G<j> or T<i>")
    p.add_argument("--gen", type=int, default=1, help="generator loop index for dumps")
    return p


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    config = RunConfig(
        n=args.n, seed=args.seed, loop_samples=args.samples, path_samples=args.path_samples,
        tol_fd=args.tol_fd, plateau_end=args.plateau_end, support_end=args.support_end,
        format=args.format,
    )
    try:
        config.validate()
        if args.dump:
            default_map = "G1" if args.dump == "loop" else "F1,2"
            cmap = parse_map(args.map or default_map, config)
            cmd_dump(args.dump, config, cmap, args.gen, out)
            return 0
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    report = run_all(config)
    out.write((report.to_json() if config.format == "json" else report.to_text()) + "\n")
    return 0 if report.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
