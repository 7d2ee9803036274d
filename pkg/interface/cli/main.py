"""Command-line front end: ``curved-nbody <subcommand> [flags]``.

Exit codes: 0 success, 1 usage or configuration error, 2 mathematical
failure (no solution, collision, certificate violation). Status lines and
logs go to stderr; JSON and CSV go to ``--out`` or stdout.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np
from pydantic import ValidationError

from core.config import settings
from core.errors import ConfigError, CurvedNBodyError, NonpositiveOmegaSqError
from core.logging import configure_logging, format_error_message, get_logger
from dynamics.integrator import integrate
from interface.cli.export import export_region_map_to_csv, export_report_to_json, export_trajectory_to_csv
from interface.cli.schemas import RunConfig
from releq.boundary import pbar_root_report
from releq.certificates import get_certificate_suite
from releq.collinear import CoefficientSystem, check_angles, f2_region, solve_masses, verify_collinear_re
from releq.ngon import ngon_nonexistence_scan, ngon_orbit, zsum_residual
from releq.residual import full_re_residual_L2
from releq.schemas import CollinearSolution

logger = get_logger(__name__)


class UsageError(Exception):
    """Raised by the parser in place of exiting."""


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_grid(text: str) -> list[float]:
    """Parse ``a,b,c`` or ``start:stop:count[:log]`` into a list of floats."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
                raise ValueError(text)
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError(text)
            if len(parts) == 4:
                if start <= 0 or stop <= 0:
                    raise ValueError(text)
                values = np.logspace(np.log10(start), np.log10(stop), count)
            else:
                values = np.linspace(start, stop, count)
            return [float(v) for v in values]
        values = [float(v) for v in text.split(",") if v.strip()]
        if not values or not all(np.isfinite(values)):
            raise ValueError(text)
        return values
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {text!r}; use a,b,c or start:stop:count[:log]")


def steps_arg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 2:
        raise argparse.ArgumentTypeError("steps must be at least 2")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _emit(payload: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode("utf-8"))
        sys.stdout.flush()


def cmd_ngon_scan(args: argparse.Namespace) -> int:
    if args.n_min > args.n_max:
        raise ConfigError("--n-min must not exceed --n-max")
    report = ngon_nonexistence_scan(
        range(args.n_min, args.n_max + 1),
        args.r_grid,
        args.omega_grid,
        wt_grid=args.wt_grid if args.t_grid is None else None,
        t_grid=args.t_grid,
        mass=args.mass,
    )
    _emit(export_report_to_json(report), args.out)
    if report.certified:
        print(f"CERTIFIED max S = {report.max_S:.17g} < 0", file=sys.stderr)
        return 0
    print(f"NOT CERTIFIED max S = {report.max_S:.17g}, chain_holds = {report.chain_holds}", file=sys.stderr)
    return 2


def cmd_ngon_residual(args: argparse.Namespace) -> int:
    masses = np.full(args.n, args.mass)
    S, terms = zsum_residual(args.n, args.r, args.omega, args.t, masses)
    report = full_re_residual_L2(lambda t: ngon_orbit(args.n, args.r, args.omega, t), masses, [args.t])
    report = report.model_copy(update={"zsum": S, "term_signs": terms})
    _emit(export_report_to_json(report), args.out)
    print(f"S = {S:.17g}", file=sys.stderr)
    return 0


def cmd_collinear_solve(args: argparse.Namespace) -> int:
    check_angles(args.alpha, args.beta)
    sol = solve_masses(args.alpha, args.beta, args.system)
    report = verify_collinear_re(sol, times=(0.0, 0.5, 1.0), t_end=None if args.skip_integration else 1.0, h=args.dt)
    sol = sol.model_copy(update={"residual_max": report.max_residual})
    _emit(export_report_to_json(sol), args.out)
    drift = report.distance_drift or 0.0
    if report.max_residual > settings.RESIDUAL_TOL or drift > settings.DISTANCE_DRIFT_TOL:
        print(
            f"error: residual>tol: residual_max = {report.max_residual:.3e}, distance drift = {drift:.3e}",
            file=sys.stderr,
        )
        return 2
    print(f"SOLVED m = {sol.m:.17g}, omega_sq = {sol.omega_sq:.17g}", file=sys.stderr)
    return 0


def cmd_region_map(args: argparse.Namespace) -> int:
    region = f2_region(args.alpha_steps, args.beta_steps, args.system)
    _emit(export_region_map_to_csv(region), args.out)
    print(f"f2 < 0 on {region.negative_count} of {len(region.cells)} cells", file=sys.stderr)
    if region.negative_count == 0:
        print("error: f2 < 0 region is empty", file=sys.stderr)
        return 2
    return 0


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read {path}: {e}") from e


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config = RunConfig.model_validate(_load_json(args.config))
        state = config.to_state()
    except ValidationError as e:
        raise ConfigError(f"Invalid run configuration: {e.error_count()} error(s): {e.errors()[0]['msg']}") from e
    except CurvedNBodyError as e:
        if e.exit_code == 1:
            raise ConfigError(str(e)) from e
        raise

    t_end = args.t_end or (config.integrator.t_end if config.integrator else None)
    dt = args.dt or (config.integrator.dt if config.integrator else None)
    if t_end is None or dt is None:
        raise ConfigError("--t-end and --dt are required when the config has no integrator section")

    try:
        trajectory = integrate(state, t_end, dt, record_every=args.record_every)
    except CurvedNBodyError as e:
        partial = getattr(e, "trajectory", None)
        if partial is not None and len(partial):
            _emit(export_trajectory_to_csv(partial), args.out)
        raise
    _emit(export_trajectory_to_csv(trajectory), args.out)
    return 0


def cmd_verify_re(args: argparse.Namespace) -> int:
    try:
        sol = CollinearSolution.model_validate(_load_json(args.solution))
    except ValidationError as e:
        raise ConfigError(f"Invalid solution file: {e.errors()[0]['msg']}") from e
    if sol.omega_sq <= 0:
        raise NonpositiveOmegaSqError("Solution has ω² <= 0", omega_sq=sol.omega_sq)
    report = verify_collinear_re(sol, times=args.times, t_end=args.t_end, h=args.dt)
    _emit(export_report_to_json(report), args.out)
    drift = report.distance_drift or 0.0
    if report.max_residual > settings.RESIDUAL_TOL or drift > settings.DISTANCE_DRIFT_TOL:
        print(f"error: residual>tol: residual_max = {report.max_residual:.3e}", file=sys.stderr)
        return 2
    return 0


def cmd_pbar_root(args: argparse.Namespace) -> int:
    _emit(export_report_to_json(pbar_root_report()), args.out)
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    suite = get_certificate_suite()
    if args.check:
        known = {c.name for c in suite.checks}
        unknown = set(args.check) - known
        if unknown:
            raise ConfigError(f"Unknown check(s): {', '.join(sorted(unknown))}")
        suite = type(suite)([c for c in suite.checks if c.name in args.check])
    results = suite.run()
    payload = json.dumps([r.model_dump() for r in results], indent=2) + "\n"
    _emit(payload.encode("utf-8"), args.out)
    for r in results:
        print(f"{r.status.upper():8} {r.check_name}" + (f": {r.message}" if r.message else ""), file=sys.stderr)
    return 2 if any(r.status == "failed" for r in results) else 0


def build_parser() -> CliParser:
    parser = CliParser(prog="curved-nbody", description="Curved n-body problem on the hyperbolic plane")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Log level (default: %(default)s)")
    parser.add_argument("--log-format", default=settings.LOG_FORMAT, choices=["console", "json"])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p = sub.add_parser("ngon-scan", help="Certify that boosted regular n-gons are not relative equilibria")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--r-grid", type=parse_grid, default=parse_grid("0.1:5:20:log"))
    p.add_argument("--omega-grid", type=parse_grid, default=parse_grid("0.1,1,2"))
    times = p.add_mutually_exclusive_group()
    times.add_argument("--wt-grid", type=parse_grid, default=parse_grid("0:5:20"), help="Values of ω·t")
    times.add_argument("--t-grid", type=parse_grid, default=None, help="Times (instead of ω·t)")
    p.add_argument("--mass", type=positive_float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_ngon_scan)

    p = sub.add_parser("ngon-residual", help="Evaluate S and the defect of one boosted n-gon")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=positive_float, required=True)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--mass", type=positive_float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_ngon_residual)

    p = sub.add_parser("collinear-solve", help="Balance the collinear five-body masses and verify the orbit")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--system", type=CoefficientSystem, choices=list(CoefficientSystem), default=CoefficientSystem.GEODESIC)
    p.add_argument("--dt", type=positive_float, default=1e-4)
    p.add_argument("--skip-integration", action="store_true", help="Only substitute the closed-form orbit")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_collinear_solve)

    p = sub.add_parser("region-map", help="Sign map of f2 over the admissible (α, β) triangle")
    p.add_argument("--alpha-steps", type=steps_arg, default=200)
    p.add_argument("--beta-steps", type=steps_arg, default=200)
    p.add_argument("--system", type=CoefficientSystem, choices=list(CoefficientSystem), default=CoefficientSystem.PRINTED)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_region_map)

    p = sub.add_parser("simulate", help="Integrate a configuration and write the trajectory CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--t-end", type=positive_float)
    p.add_argument("--dt", type=positive_float)
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("verify-re", help="Check a collinear-solve JSON against the dynamics")
    p.add_argument("--solution", required=True)
    p.add_argument("--times", type=parse_grid, default=[0.0, 0.5, 1.0])
    p.add_argument("--t-end", type=positive_float, default=1.0)
    p.add_argument("--dt", type=positive_float, default=1e-4)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_verify_re)

    p = sub.add_parser("pbar-root", help="Root of the boundary cubic and the angle α₁")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_pbar_root)

    p = sub.add_parser("audit", help="Run the numerical certificate checks")
    p.add_argument("--check", action="append", help="Run only the named check (repeatable)")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_audit)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 1

    configure_logging(args.log_level, args.log_format)
    try:
        return args.handler(args)
    except CurvedNBodyError as e:
        logger.error("Command failed", command=args.command, reason=e.reason, error=str(e))
        print(f"error: {e.reason}: {format_error_message(e, {'stage': args.command})}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"error: {format_error_message(e, {'stage': args.command})}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
