"""Command-line front end.

One subcommand per module: tq (critical point of Q), series (coefficient
table and inverse series), disk (complex-disk certificates), construct
(fixed-point builder), witness (Poisson family), bose (resolvent solver),
verify (inequality check on a stored field). Every run writes a manifest
JSON with the resolved configuration, package version and wall time; all
artifacts are written atomically. Exit codes: 0 success, 2 validation
error, 3 convergence or certificate failure (diagnostics still written).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from . import bose as bose_mod
from . import constructor, disk, field, series, witness
from .errors import (
    CeilingViolated,
    ConvergenceFailure,
    ConvlabError,
    DecayGuard,
    GridMismatch,
    InvalidCoefficients,
    InvalidOrder,
    MassTooLarge,
    NotConverged,
)
from .ioutil import atomic_write_text
from .qpoly import CoeffVector, build_poly

_VALIDATION_ERRORS = (
    InvalidCoefficients,
    GridMismatch,
    InvalidOrder,
    MassTooLarge,
    DecayGuard,
    ValueError,
)


def _emit(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path:
        atomic_write_text(path, text)
    else:
        sys.stdout.write(text)


def _grid_from_args(args) -> field.Grid:
    return field.Grid(dim=args.dim, extent=args.extent, points_per_axis=args.points)


def _parse_field_spec(spec: str, grid: field.Grid) -> field.Field:
    """'gaussian:sigma=0.5,mass=0.2', 'delta:mass=1', 'uniform:mass=1' or
    'file:<path.cvlf>'."""
    kind, _, rest = spec.partition(":")
    if kind == "file":
        f = field.read_cvlf(rest)
        if f.grid != grid:
            raise GridMismatch(f"{rest} holds a {f.grid}, expected {grid}")
        return f
    params = {}
    if rest:
        for part in rest.split(","):
            key, eq, val = part.partition("=")
            if not eq:
                raise ValueError(f"malformed field parameter {part!r} in {spec!r}")
            params[key.strip()] = float(val)
    mass = params.pop("mass", 1.0)
    if kind == "gaussian":
        if "sigma" not in params:
            raise ValueError("gaussian spec needs sigma=")
        sigma = params.pop("sigma")
    if params:
        raise ValueError(f"unknown field parameters {sorted(params)} in {spec!r}")
    if kind == "gaussian":
        return field.gaussian_field(grid, sigma=sigma, mass=mass)
    if kind == "delta":
        return field.delta_field(grid, mass=mass)
    if kind == "uniform":
        return field.uniform_field(grid, mass=mass)
    raise ValueError(f"unknown field kind {kind!r}")


def _write_field(f: field.Field, path: str) -> None:
    if path.endswith(".csv"):
        field.write_csv(f, path)
    else:
        field.write_cvlf(f, path)


# --- subcommand handlers --------------------------------------------------

def _cmd_tq(args) -> int:
    p = build_poly(CoeffVector.parse(args.coeffs))
    _emit({"t_q": p.t_q, "q_max": p.q_max}, args.out)
    return 0


def _cmd_series(args) -> int:
    coeffs = CoeffVector.parse(args.coeffs)
    p = build_poly(coeffs)
    table = series.iterate_table(coeffs, J=args.rows, L_cap=args.cap)
    payload = {
        "table": table.to_json(),
        "diagonal": [str(v) for v in table.diagonal()],
        "mass_certificate": series.mass_bound_certificate(table, p),
        "t_q": p.t_q,
        "q_max": p.q_max,
    }
    _emit(payload, args.out)
    return 0


def _cmd_disk(args) -> int:
    p = build_poly(CoeffVector.parse(args.coeffs))
    report = disk.disk_scan(
        p,
        radial_steps=args.radial,
        angular_steps=args.angular,
        pair_samples=args.pairs,
        rng_seed=args.seed,
    )
    certified = (
        report.sup_p_prime < 1.0
        and report.sup_p_over_z < 1.0
        and report.injectivity_violations == 0
    )
    payload = report.to_json()
    payload["certified"] = certified
    _emit(payload, args.out)
    return 0 if certified else 3


def _cmd_construct(args) -> int:
    coeffs = CoeffVector.parse(args.coeffs)
    p = build_poly(coeffs)
    grid = _grid_from_args(args)
    psi = _parse_field_spec(args.psi, grid)
    try:
        result, report = constructor.construct(
            psi, coeffs, p, tol=args.tol, max_iter=args.max_iter
        )
    except NotConverged as exc:
        if exc.field is not None and args.out:
            _write_field(exc.field, args.out)
        _emit({"error": str(exc), "report": exc.report.to_json()}, args.report)
        return 3
    if args.out:
        _write_field(result, args.out)
    slack, mass = constructor.verify_inequality(result, coeffs)
    payload = report.to_json()
    payload.update({"min_slack": slack, "mass": mass, "t_q": p.t_q})
    _emit(payload, args.report)
    return 0


def _cmd_witness(args) -> int:
    grid = _grid_from_args(args)
    params = witness.PoissonParams(a=args.a, t=args.t, grid=grid)
    f = witness.poisson_field(params)
    if args.out:
        _write_field(f, args.out)
    slack, mass = witness.check_two_fold(f)
    _emit({"min_slack": slack, "mass": mass, "a": args.a, "t": args.t}, args.report)
    return 0


def _cmd_bose(args) -> int:
    grid = _grid_from_args(args)
    potential = _parse_field_spec(args.V, grid)
    problem = bose_mod.BoseProblem(m=args.m, xi=args.xi, mu=args.mu, V=potential, grid=grid)
    try:
        sol = bose_mod.solve(problem, tol=args.tol, max_iter=args.max_iter)
    except NotConverged as exc:
        _emit({"error": str(exc), "report": exc.report.to_json()}, args.report)
        return 3
    except CeilingViolated as exc:
        payload = {"error": str(exc)}
        if exc.solution is not None:
            payload["report"] = exc.solution.report.to_json()
        _emit(payload, args.report)
        return 3
    cert = bose_mod.apriori_certificate(sol)
    if args.out:
        _write_field(sol.u, args.out)
    payload = {
        "solve": sol.report.to_json(),
        "delta": sol.delta,
        "hypothesis_value": sol.hypothesis_value,
        "certificate": cert.to_json(),
    }
    _emit(payload, args.report)
    return 0 if cert.passed else 3


def _cmd_verify(args) -> int:
    coeffs = CoeffVector.parse(args.coeffs)
    p = build_poly(coeffs)
    f = field.read_cvlf(args.field)
    slack, mass = constructor.verify_inequality(f, coeffs)
    scale = field.l1_norm(f)
    slack_ok = slack >= -1e-10 * max(1.0, scale)
    mass_ok = mass <= p.t_q + 1e-9
    payload = {
        "min_slack": slack,
        "mass": mass,
        "t_q": p.t_q,
        "slack_ok": slack_ok,
        "mass_ok": mass_ok,
    }
    _emit(payload, args.out)
    return 0 if (slack_ok and mass_ok) else 3


# --- parser ---------------------------------------------------------------

def _add_coeffs(sp) -> None:
    sp.add_argument(
        "--coeffs",
        required=True,
        help="comma list a2,a3,... of the inequality f >= sum a_n (*^n f)",
    )


def _add_grid(sp) -> None:
    sp.add_argument("--dim", type=int, default=1, help="grid dimension (1, 2 or 3)")
    sp.add_argument("--extent", type=float, default=16.0, help="box side length L")
    sp.add_argument("--points", type=int, default=1024, help="nodes per axis (power of two)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convlab",
        description="Numerical laboratory for the iterated convolution "
        "inequality f >= sum a_n (*^n f) on periodic grids.",
    )
    parser.add_argument(
        "--manifest",
        default="convlab-manifest.json",
        help="path for the run manifest (resolved config, version, wall time)",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser(
        "tq", help="critical point t_Q and maximum Q(t_Q) of Q(t) = t - sum a_n t^n"
    )
    _add_coeffs(sp)
    sp.add_argument("--out", default=None, help="write JSON here instead of stdout")
    sp.set_defaults(handler=_cmd_tq)

    sp = sub.add_parser(
        "series",
        help="coefficient table m_{j,l} of the iterative construction, its "
        "diagonal (the compositional inverse of Q) and the mass certificate",
    )
    _add_coeffs(sp)
    sp.add_argument("--rows", type=int, default=8, help="number of iterations J")
    sp.add_argument("--cap", type=int, default=series.DEFAULT_L_CAP, help="column cap L")
    sp.add_argument("--out", default=None)
    sp.set_defaults(handler=_cmd_series)

    sp = sub.add_parser(
        "disk",
        help="certificates on |z| < t_Q: roots of Q', sup|P'|, sup|P/z|, "
        "sampled injectivity of Q",
    )
    _add_coeffs(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--radial", type=int, default=64)
    sp.add_argument("--angular", type=int, default=128)
    sp.add_argument("--pairs", type=int, default=10_000)
    sp.add_argument("--out", default=None)
    sp.set_defaults(handler=_cmd_disk)

    sp = sub.add_parser(
        "construct",
        help="iterate Psi_{j+1} = psi + sum a_n (*^n Psi_j) to its L1 fixed point",
    )
    _add_coeffs(sp)
    _add_grid(sp)
    sp.add_argument("--psi", required=True, help="seed, e.g. gaussian:sigma=0.5,mass=0.2")
    sp.add_argument("--tol", type=float, default=constructor.DEFAULT_TOL)
    sp.add_argument("--max-iter", type=int, default=constructor.DEFAULT_MAX_ITER)
    sp.add_argument("--out", default=None, help="field output (.cvlf, or .csv for d=1)")
    sp.add_argument("--report", default=None, help="solve report JSON")
    sp.set_defaults(handler=_cmd_construct)

    sp = sub.add_parser(
        "witness",
        help="Poisson witness a C_d t/(t^2+||x||^2)^((d+1)/2) for f >= f*f, "
        "periodized to the box",
    )
    sp.add_argument("--a", type=float, required=True, help="mass parameter, 0 < a <= 0.5")
    sp.add_argument("--t", type=float, required=True, help="scale parameter, t > 0")
    _add_grid(sp)
    sp.add_argument("--out", default=None, help="field output (.csv for d=1, else .cvlf)")
    sp.add_argument("--report", default=None)
    sp.set_defaults(handler=_cmd_witness)

    sp = sub.add_parser(
        "bose",
        help="solve (xi - Laplacian)^m u = V(1-u) + mu (*^(m+1) u) by Picard "
        "iteration and check the non-negativity certificate",
    )
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--xi", type=float, default=1.0)
    sp.add_argument("--mu", type=float, default=0.0)
    sp.add_argument("--V", required=True, help="potential, e.g. gaussian:sigma=0.5,mass=0.1")
    _add_grid(sp)
    sp.add_argument("--tol", type=float, default=bose_mod.DEFAULT_TOL)
    sp.add_argument("--max-iter", type=int, default=bose_mod.DEFAULT_MAX_ITER)
    sp.add_argument("--out", default=None, help="solution field output")
    sp.add_argument("--report", default=None)
    sp.set_defaults(handler=_cmd_bose)

    sp = sub.add_parser(
        "verify", help="check f >= sum a_n (*^n f) and the t_Q mass bound on a stored field"
    )
    _add_coeffs(sp)
    sp.add_argument("--field", required=True, help="CVLF file to check")
    sp.add_argument("--out", default=None)
    sp.set_defaults(handler=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    start = time.perf_counter()
    try:
        code = args.handler(args)
    except _VALIDATION_ERRORS as exc:
        sys.stderr.write(f"error: {exc}\n")
        code = 2
    except (NotConverged, CeilingViolated, ConvergenceFailure) as exc:
        sys.stderr.write(f"error: {exc}\n")
        code = 3
    except ConvlabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        code = 2
    _write_manifest(args, start, code)
    return code


def _write_manifest(args, start: float, code: int) -> None:
    config = {
        k: v
        for k, v in vars(args).items()
        if k not in ("handler", "manifest") and not callable(v)
    }
    manifest = {
        "tool": "convlab",
        "version": __version__,
        "config": config,
        "exit_code": code,
        "wall_time_s": time.perf_counter() - start,
    }
    try:
        atomic_write_text(args.manifest, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        sys.stderr.write(f"warning: could not write manifest: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
