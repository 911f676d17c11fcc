"""Command-line front end: model tables, verification runs, spectrum dumps and branches.

Exit codes
    0  success (all applicable checks passed, all branch points certified)
    1  a check failed or a branch point was not certified
    2  invalid command-line arguments
    3  malformed or inadmissible domain spec (nothing was computed)
    4  solver failure
    5  branch truncated (partial output written)
    6  file could not be written or read

Output files go to ``--out`` or, when absent, to the directory named by the
``RINGSERRIN_OUT`` environment variable, or else the working directory.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_SPEC = 3
EXIT_SOLVER = 4
EXIT_TRUNCATED = 5
EXIT_IO = 6

OUT_ENV = "RINGSERRIN_OUT"

log = logging.getLogger("ringserrin")


class SpecError(ValueError):
    pass


# --------------------------------------------------------------------------
# argument helpers

def parse_grid(text: str, *, integer: bool = False) -> list:
    """``"a:b:h"`` (inclusive, equispaced) or a comma-separated list."""
    text = text.strip()
    conv = int if integer else float
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            a, b, h = (conv(p) for p in parts)
            if h <= 0 or b < a:
                raise ValueError
            n = int(math.floor((b - a) / h + 1e-9)) + 1
            vals = [a + i * h for i in range(n)]
            if not integer:
                vals = [round(v, 12) for v in vals]
            return vals
        vals = [conv(p) for p in text.split(",") if p.strip()]
        if not vals:
            raise ValueError
        return vals
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}; use start:stop:step or a comma list") from None


def parse_resolution(text: str) -> tuple[int, int]:
    try:
        nt, nr = (int(p) for p in text.replace("x", ",").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid resolution {text!r}; use N_THETA,N_R") from None
    if nt < 16 or nt % 2 or nr < 12:
        raise argparse.ArgumentTypeError("resolution needs an even N_THETA >= 16 and N_R >= 12")
    return nt, nr


def _positive_float(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def output_dir(arg) -> Path:
    d = Path(arg) if arg else Path(os.environ.get(OUT_ENV) or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


# --------------------------------------------------------------------------
# domain specs

SPEC_KEYS = {"name", "lambda", "inner_cos", "inner_sin", "outer_cos", "outer_sin"}


def load_domain_spec(data):
    """Validate a domain spec (mapping) and build the domain; raises :class:`SpecError`."""
    from .solver import DomainError, RingDomain

    if not isinstance(data, dict):
        raise SpecError("domain spec must be a JSON object")
    unknown = set(data) - SPEC_KEYS
    if unknown:
        raise SpecError(f"unknown keys in domain spec: {sorted(unknown)}")
    if "lambda" not in data:
        raise SpecError("domain spec needs 'lambda'")
    lam = data["lambda"]
    if not isinstance(lam, (int, float)) or isinstance(lam, bool) or not math.isfinite(lam):
        raise SpecError("'lambda' must be a finite number")
    coeffs = {}
    for key in ("inner_cos", "inner_sin", "outer_cos", "outer_sin"):
        v = data.get(key, [0.0])
        if not isinstance(v, list) or not v or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x) for x in v):
            raise SpecError(f"'{key}' must be a nonempty list of finite numbers")
        coeffs[key] = v
    try:
        dom = RingDomain(float(lam), **coeffs)
    except DomainError as exc:
        raise SpecError(str(exc)) from None
    return str(data.get("name", "domain")), dom


def random_domain_spec(seed: int) -> dict:
    """A small random perturbation of a model annulus (deterministic in ``seed``)."""
    rng = np.random.default_rng(seed)
    lam = float(np.round(rng.uniform(0.2, 0.6), 6))
    amp = 0.15 * lam
    spec = {"name": f"random_{seed}", "lambda": lam}
    for key in ("inner_cos", "inner_sin", "outer_cos", "outer_sin"):
        c = np.zeros(5)
        c[2:] = rng.uniform(-1.0, 1.0, 3) * amp / np.arange(2, 5) ** 2
        spec[key] = [float(x) for x in np.round(c, 8)]
    return spec


# --------------------------------------------------------------------------
# subcommands

def cmd_model_table(args) -> int:
    from .io import write_json
    from .model import model_table, write_model_table

    grid = args.grid or [round(0.1 * i, 12) for i in range(10)]
    if any(not (0.0 <= R < 1.0) for R in grid):
        print("error: core radii must lie in [0, 1)", file=sys.stderr)
        return EXIT_USAGE
    try:
        rows = model_table(grid)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = output_dir(args.out)
    path = out / f"model_table.{args.format}"
    if args.format == "csv":
        write_model_table(rows, path)
    else:
        write_json(path, [r.__dict__ for r in rows])
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    from .io import write_csv, write_json
    from .spectrum import spectrum_table

    lams = args.grid or [round(0.01 * i, 12) for i in range(1, 100)]
    ks = args.ks or list(range(1, 11))
    if any(not (0.0 < x < 1.0) for x in lams) or any(k < 0 for k in ks):
        print("error: lambda values must lie in (0, 1) and frequencies be >= 0", file=sys.stderr)
        return EXIT_USAGE
    rows = spectrum_table(lams, ks)
    out = output_dir(args.out)
    path = out / f"spectrum.{args.format}"
    cols = ("lambda", "k", "T", "D", "mu1", "mu2")
    if args.format == "csv":
        write_csv(path, cols, ([r[c] for c in cols] for r in rows))
    else:
        write_json(path, [{c: r[c] for c in cols} for r in rows])
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_bifurcation_points(args) -> int:
    from .io import write_csv, write_json
    from .spectrum import find_bifurcation_point, verify_zero_condition

    if args.k_max < 2:
        print("error: --k-max must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    rows = []
    for k in range(2, args.k_max + 1):
        bp = find_bifurcation_point(k)
        zc = verify_zero_condition(bp.lam, k)
        rows.append({"k": k, "lambda": bp.lam, "R": bp.R, "mu1": bp.mu1, "dmu1_dlambda": bp.dmu1,
                     "unique": bp.unique, "cond3_residual": zc.cond3_residual,
                     "cond4_margin": zc.cond4_margin, "cond5_margin": zc.cond5_margin,
                     "coth_margin": zc.coth_margin, "zero_condition": zc.passed})
    out = output_dir(args.out)
    path = out / f"bifurcation_points.{args.format}"
    if args.format == "csv":
        cols = list(rows[0])
        write_csv(path, cols, ([r[c] for c in cols] for r in rows))
    else:
        write_json(path, rows)
    for r in rows:
        print(f"k={r['k']:3d}  lambda_k={r['lambda']:.15f}  zero condition {'ok' if r['zero_condition'] else 'FAILED'}")
    print(f"wrote {path}")
    return EXIT_OK if all(r["zero_condition"] and r["unique"] for r in rows) else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    from .checks import gradient_samples, regions, run_suite
    from .io import write_csv, write_json
    from .solver import solve

    try:
        if args.random:
            spec = random_domain_spec(args.seed)
        elif args.spec is None:
            raise SpecError("give a domain spec file or --random")
        else:
            try:
                with open(args.spec) as fh:
                    spec = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SpecError(f"{args.spec}: invalid JSON ({exc})") from None
            except OSError as exc:
                print(f"error: cannot read {args.spec}: {exc.strerror}", file=sys.stderr)
                return EXIT_IO
        name, dom = load_domain_spec(spec)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    try:
        f = solve(dom, args.resolution)
    except Exception as exc:  # noqa: BLE001 - any solver failure maps to one exit code
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    tol = args.tol if args.tol is not None else 1e-6
    report = run_suite(f, tol=tol, pohozaev_tol=tol, full=True)
    report["name"] = name
    report["spec"] = spec
    failed = [f"{reg['side']}:{c['name']}" for reg in report["regions"] for c in reg["checks"]
              if c["applicable"] and c["passed"] is False]
    report["all_applicable_passed"] = not failed
    out = output_dir(args.out)
    path = out / f"verify_{name}.json"
    write_json(path, report)
    if args.dump:
        for rv in regions(f):
            d = gradient_samples(rv)
            cols = list(d)
            write_csv(out / f"verify_{name}_{rv.side.value}_samples.csv", cols, zip(*(d[c] for c in cols)))
    for reg in report["regions"]:
        for c in reg["checks"]:
            status = "n/a" if not c["applicable"] else ("pass" if c["passed"] else "FAIL")
            print(f"{reg['side']:6s} {c['name']:26s} {status:5s} worst={c['worst']}")
    print(f"wrote {path}")
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


def cmd_branch(args) -> int:
    from .continuation import (certify_branch_point, continue_branch, write_branch_json,
                               write_branch_summary)

    tol = args.tol if args.tol is not None else 1e-8
    try:
        branch = continue_branch(args.k, args.steps, args.ds, resolution=args.resolution, tol_newton=tol)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    certs = [certify_branch_point(p, base_resolution=args.resolution, tol_newton=tol) for p in branch.points]
    out = output_dir(args.out)
    jpath = out / f"branch_k{args.k}.json"
    cpath = out / f"branch_k{args.k}_summary.csv"
    write_branch_json(branch, jpath, certs)
    write_branch_summary(branch, cpath, certs)
    for p, c in zip(branch.sorted_points(), certs):
        print(f"s={p.s:+.4f}  lambda={p.lam:.12f}  amplitude={p.mode_amplitude:+.6e}  "
              f"residual={p.residual_sup:.1e}  {'certified' if c.passed else 'NOT certified: ' + '; '.join(c.failures)}")
    for d in branch.diagnostics:
        print(f"diagnostic: {d}", file=sys.stderr)
    print(f"wrote {jpath} and {cpath}")
    if branch.truncated:
        return EXIT_TRUNCATED
    return EXIT_OK if all(c.passed for c in certs) else EXIT_CHECK_FAILED


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=f"output directory (default: ${OUT_ENV} or the working directory)")
    common.add_argument("--format", choices=("csv", "json"), default=None,
                        help="tabular output format (default: json for bifurcation-points, else csv)")
    common.add_argument("--tol", type=_positive_float, default=None, help="check or Newton tolerance override")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized domains")
    common.add_argument("--resolution", type=parse_resolution, default=(96, 64), help="N_THETA,N_R")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ringserrin", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("model-table", parents=[common], help="model calibration table")
    m.add_argument("--grid", type=parse_grid, help="core radii, e.g. 0:0.9:0.1")
    m.set_defaults(func=cmd_model_table)

    v = sub.add_parser("verify", parents=[common], help="solve on a domain and run every check")
    v.add_argument("spec", nargs="?", help="JSON domain spec")
    v.add_argument("--random", action="store_true", help="use a random perturbed annulus from --seed")
    v.add_argument("--dump", action="store_true", help="also write per-node gradient-estimate samples")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues of the linearization")
    s.add_argument("--grid", type=parse_grid, help="lambda values, e.g. 0.01:0.99:0.01")
    s.add_argument("--ks", type=lambda t: parse_grid(t, integer=True), help="frequencies, e.g. 1:10:1")
    s.set_defaults(func=cmd_spectrum)

    b = sub.add_parser("bifurcation-points", parents=[common], help="lambda_k with zero-condition data")
    b.add_argument("--k-max", type=int, default=10)
    b.set_defaults(func=cmd_bifurcation_points, default_format="json")

    c = sub.add_parser("branch", parents=[common], help="continue a bifurcating branch and certify it")
    c.add_argument("--k", type=int, default=2, help="bifurcating frequency")
    c.add_argument("--steps", type=int, default=3, help="points per sign of s")
    c.add_argument("--ds", type=_positive_float, default=1e-2, help="step in s")
    c.set_defaults(func=cmd_branch)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, "default_format", "csv")
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
