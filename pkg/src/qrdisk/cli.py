"""Command-line front end.

Subcommands: analyze, frontier, poisson, bounds, gallery.  Reports are
JSON (schema ``qrdisk-report/v1``; the field set depends only on the
subcommand) or CSV where a tabular dump makes sense.  Exit codes:
0 success, 1 claim/check failure, 2 input error, 3 numerical
nonconvergence.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import _kernels
from .bounds import lipschitz_M
from .calculus import SampleGrid, colipschitz_estimate, lipschitz_estimate, pde_inequality_check
from .expr import ParseError, parse
from .gallery import example21, example41, verify_case
from .poisson import (
    BoundaryData,
    PoissonSolution,
    QuadratureConvergenceError,
    QuadratureSpec,
    SourceField,
    green_potential,
    poisson_extend,
)
from .qrclass import pareto_frontier, profile_of, properness_check, sense_preserving_check

SCHEMA = "qrdisk-report/v1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_NONCONVERGENCE = 3


def _parse_complex(text: str) -> complex:
    t = text.strip().replace("i", "j").replace(" ", "")
    try:
        return complex(t)
    except ValueError as exc:
        raise ValueError(f"cannot read complex number from {text!r}") from exc


def _grid_from_args(args) -> SampleGrid:
    return SampleGrid(n_r=args.n_r, n_theta=args.n_theta, margin=args.margin)


def _add_grid_args(sp):
    sp.add_argument("--n-r", type=int, default=200, help="radial grid count")
    sp.add_argument("--n-theta", type=int, default=256, help="angular grid count")
    sp.add_argument("--margin", type=float, default=1e-3, help="rim margin of the grid")


def _emit(args, payload: dict | str) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _report(subcommand: str, params: dict, results: dict) -> dict:
    return {"schema": SCHEMA, "subcommand": subcommand, "params": params, "results": results}


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def _cmd_analyze(args) -> int:
    e = parse(args.expression)
    grid = _grid_from_args(args)
    profile = profile_of(e, grid)
    ks = args.k_values or [1.0, 2.0, 4.0, 8.0]
    frontier = pareto_frontier(profile, sorted(ks))
    margins = args.properness_margins or [1e-1, 1e-2, 1e-3]
    sense = sense_preserving_check(profile)
    results = {
        "expression": e.to_source(),
        "lipschitz_estimate": lipschitz_estimate(e, grid),
        "colipschitz_estimate": colipschitz_estimate(e, grid),
        "min_jac": sense.min_jac,
        "sense_preserving": sense.all_positive,
        "frontier": [{"K": k, "kprime_min": kp} for k, kp in frontier.entries],
        "properness": {"margins": margins, "min_modulus": properness_check(e, margins)},
        "pde_checks": [],
    }
    ok = True
    for m, n in args.pde or []:
        rep = pde_inequality_check(e, m, n, grid)
        ok = ok and rep.holds
        results["pde_checks"].append(
            {"M": m, "N": n, "holds": rep.holds, "worst_margin": rep.worst_margin,
             "witness": [rep.witness.real, rep.witness.imag]}
        )
    params = {"grid": {"n_r": grid.n_r, "n_theta": grid.n_theta, "margin": grid.margin}, "seed": args.seed}
    _emit(args, _report("analyze", params, results))
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _cmd_frontier(args) -> int:
    e = parse(args.expression)
    grid = _grid_from_args(args)
    frontier = pareto_frontier(profile_of(e, grid), sorted(args.k_values))
    if args.format == "csv":
        buf = io.StringIO()
        frontier.to_csv(buf)
        _emit(args, buf.getvalue().rstrip("\n"))
        return EXIT_OK
    params = {"grid": {"n_r": grid.n_r, "n_theta": grid.n_theta, "margin": grid.margin}}
    results = {"expression": e.to_source(),
               "frontier": [{"K": k, "kprime_min": kp} for k, kp in frontier.entries]}
    _emit(args, _report("frontier", params, results))
    return EXIT_OK


def _boundary_from_spec(spec: str, n: int) -> BoundaryData:
    if spec == "identity":
        return BoundaryData.identity(n)
    if spec.startswith("csv:"):
        return BoundaryData.from_csv(spec[4:])
    return BoundaryData.from_expr(parse(spec), n)


def _cmd_poisson(args) -> int:
    f = _boundary_from_spec(args.f, args.boundary_n)
    g = SourceField.from_expr(parse(args.g))
    quad = QuadratureSpec(n_theta=args.quad_n_theta, n_r=args.quad_n_r, epsilon_split=args.eps_split)
    sol = PoissonSolution(f, g, quad)
    evals = []
    for ztext in args.eval or []:
        z = _parse_complex(ztext)
        if args.convergence_tol is not None:
            green_potential(g, z, quad, convergence_tol=args.convergence_tol)
        w = sol(z)
        evals.append({"z": [z.real, z.imag], "w": [w.real, w.imag]})
    results = {"boundary": args.f, "source": args.g, "evaluations": evals}
    if args.dump_grid:
        grid = SampleGrid(n_r=args.grid_n_r, n_theta=args.grid_n_theta, margin=args.grid_margin)
        with open(args.dump_grid, "w") as fh:
            sol.to_csv_grid(fh, grid)
        results["grid_csv"] = args.dump_grid
    params = {
        "quad": {"n_theta": quad.n_theta, "n_r": quad.n_r, "epsilon_split": quad.epsilon_split},
        "boundary_n": args.boundary_n,
    }
    _emit(args, _report("poisson", params, results))
    return EXIT_OK


def _cmd_bounds(args) -> int:
    bs = lipschitz_M(args.K, args.Kp, args.gsup)
    params = {"K": args.K, "Kp": args.Kp, "gsup": args.gsup}
    _emit(args, _report("bounds", params, bs.to_dict()))
    return EXIT_OK


def _cmd_gallery(args) -> int:
    grid = _grid_from_args(args)
    cases = [example21()] + [example41(n) for n in (args.n or [1])]
    reports = [verify_case(c, grid) for c in cases]
    n_claims = sum(len(r.results) for r in reports)
    n_passed = sum(sum(cr.passed for cr in r.results) for r in reports)
    results = {
        "cases": [r.to_dict() for r in reports],
        "claims_total": n_claims,
        "claims_passed": n_passed,
    }
    params = {"grid": {"n_r": grid.n_r, "n_theta": grid.n_theta, "margin": grid.margin},
              "n": list(args.n or [1])}
    _emit(args, _report("gallery", params, results))
    return EXIT_OK if n_passed == n_claims else EXIT_CHECK_FAILED


# ----------------------------------------------------------------------
# argument plumbing
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qrdisk", description=__doc__)
    ap.add_argument("--output", help="write the report here instead of stdout")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker threads for grid sweeps (default: QRDISK_THREADS or all)")
    ap.add_argument("--seed", type=int, default=0, help="seed recorded for randomized runs")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("analyze", help="gradient statistics, frontier, and inequality checks")
    sp.add_argument("expression")
    _add_grid_args(sp)
    sp.add_argument("--pde", nargs=2, type=float, action="append", metavar=("M", "N"),
                    help="check |lap w| <= M |grad w|^2 + N (repeatable)")
    sp.add_argument("--k-values", nargs="+", type=float)
    sp.add_argument("--properness-margins", nargs="+", type=float)
    sp.set_defaults(fn=_cmd_analyze)

    sp = sub.add_parser("frontier", help="minimal-offset frontier over K")
    sp.add_argument("expression")
    _add_grid_args(sp)
    sp.add_argument("--k-values", nargs="+", type=float, default=[1.0, 2.0, 4.0, 8.0])
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.set_defaults(fn=_cmd_frontier)

    sp = sub.add_parser("poisson", help="solve lap w = g with boundary values f")
    sp.add_argument("--f", required=True, help='"identity", "csv:PATH", or a mapping expression')
    sp.add_argument("--g", required=True, help="source expression (constants allowed)")
    sp.add_argument("--eval", action="append", metavar="Z", help="evaluation point, e.g. 0.3+0.4i")
    sp.add_argument("--boundary-n", type=int, default=256)
    sp.add_argument("--quad-n-theta", type=int, default=512)
    sp.add_argument("--quad-n-r", type=int, default=256)
    sp.add_argument("--eps-split", type=float, default=0.05)
    sp.add_argument("--convergence-tol", type=float, default=None,
                    help="fail with exit 3 if doubling n_r moves values more than this")
    sp.add_argument("--dump-grid", help="write solution values on a polar grid to this CSV")
    sp.add_argument("--grid-n-r", type=int, default=48)
    sp.add_argument("--grid-n-theta", type=int, default=96)
    sp.add_argument("--grid-margin", type=float, default=1e-2)
    sp.set_defaults(fn=_cmd_poisson)

    sp = sub.add_parser("bounds", help="explicit constant chain for (K, K', sup|g|)")
    sp.add_argument("--K", type=float, required=True)
    sp.add_argument("--Kp", type=float, required=True)
    sp.add_argument("--gsup", type=float, required=True)
    sp.set_defaults(fn=_cmd_bounds)

    sp = sub.add_parser("gallery", help="verify the worked-example claim suite")
    _add_grid_args(sp)
    sp.add_argument("--n", nargs="+", type=int, help="shrink-family indices (default: 1)")
    sp.set_defaults(fn=_cmd_gallery)
    return ap


def _merge_value_flags(argv: list[str]) -> list[str]:
    # let expression values that begin with "-" (e.g. --g "-4*z") survive argparse
    merged, i = [], 0
    takes_expr = {"--g", "--f", "--eval"}
    while i < len(argv):
        a = argv[i]
        if a in takes_expr and i + 1 < len(argv):
            merged.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            merged.append(a)
            i += 1
    return merged


def main(argv=None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    args = build_parser().parse_args(_merge_value_flags(argv))
    if args.threads is not None:
        _kernels.set_num_threads(args.threads)
    try:
        return args.fn(args)
    except ParseError as exc:
        d = exc.diagnostic
        print(f"error: {d.kind} error at offset {d.position}: {d.message}", file=sys.stderr)
        return EXIT_INPUT
    except QuadratureConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
