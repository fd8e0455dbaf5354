"""Splitting Equivalence - command-line entry point.

Subcommands:
    run             run a splitting method from a TOML config and write a CSV trace
    verify          check one of the method correspondences and write a report
    counterexample  compare MAP and Dykstra on the line/half-plane example

Exit codes: 0 success/pass, 1 verification failed, 2 bad input or config,
3 numerical failure (or a module precondition surfaced by verify).
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from .algorithms import METHODS, run
from .config import (
    build_problem,
    check_start_fields,
    load_run_config,
    load_verify_config,
    resolve_start,
)
from .equivalence import (
    ADMM_DR,
    ADMM_INTERMEDIATE_PR,
    CP_DR_IDENTITY,
    CP_DR_LIFTED,
    DR_ADMM,
    DYKSTRA_MAP_SUBSPACE,
    PR_ADMM_INTERMEDIATE,
    SELF_DUALITY,
    SOLUTION_START,
    THEOREMS,
    EquivalenceReport,
    dykstra_map_counterexample,
    verify_admm_dr,
    verify_admm_intermediate_pr,
    verify_cp_dr_identity_case,
    verify_cp_lifted_dr,
    verify_dr_admm,
    verify_dykstra_subspace_closed_form,
    verify_pr_admm_intermediate,
    verify_self_duality,
    verify_solution_start,
)
from .errors import ConfigurationError, InvalidInputError, NumericalError, SplittingError
from .output_generator import OutputGenerator, format_float
from .problems import ProblemBundle
from .settings import Settings, load_settings, normalize_log_level

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    """Parser with the run, verify and counterexample subcommands."""
    parser = argparse.ArgumentParser(
        prog="splitting-equivalence",
        description="Run DR/PR/ADMM/CP/Dykstra/MAP iterations and verify their correspondences.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (overrides SPLITEQ_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help=f"run a method ({', '.join(METHODS)}) from a config file")
    run_parser.add_argument("--config", required=True, help="TOML run config")
    run_parser.add_argument("--iters", type=int, default=None, help="iteration budget (overrides the config)")
    run_parser.add_argument("--tol", type=float, default=None, help="early-stop residual (overrides the config)")
    run_parser.add_argument("--out", default=None, help="CSV trace path (overrides the config)")

    verify_parser = sub.add_parser("verify", help="verify a method correspondence")
    verify_parser.add_argument("theorem", choices=THEOREMS, help="correspondence to check")
    verify_parser.add_argument("--config", required=True, help="TOML verify config")
    verify_parser.add_argument("--iters", type=int, default=None, help="iterations to check (overrides the config)")
    verify_parser.add_argument("--tol", type=float, default=None, help="absolute tolerance (overrides the config)")
    verify_parser.add_argument("--out", default=None, help="report CSV path (overrides the config)")

    ce_parser = sub.add_parser("counterexample", help="MAP vs Dykstra on the line/half-plane example")
    ce_parser.add_argument("--alpha", type=float, required=True, help="first start coordinate (< 0)")
    ce_parser.add_argument("--beta", type=float, required=True, help="second start coordinate (0 < beta <= -alpha)")
    ce_parser.add_argument("--iters", type=int, default=200, help="number of iterations")
    ce_parser.add_argument("--out", default=None, help="optional CSV of both iterate sequences")
    return parser


def _split_out(out: Optional[str], default_dir: str) -> tuple:
    """Split an --out path into (directory, filename); no path means default_dir and a timestamped name."""
    if out is None:
        return default_dir, None
    path = Path(out)
    return str(path.parent), path.name


def _vector_text(v: np.ndarray) -> str:
    return "(" + ", ".join(format_float(x) for x in v) + ")"


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    """Run a method from a config and write the CSV trace."""
    config = load_run_config(args.config)
    bundle = build_problem(config.problem)
    start = resolve_start(bundle, config.start)
    check_start_fields(config.method, start)

    iterations = _first(args.iters, config.iterations, settings.default_iterations)
    stop_tol = _first(args.tol, config.stop_tol, settings.default_stop_tol)
    if iterations < 0 or stop_tol < 0:
        raise ConfigurationError("iterations and stop tolerance must be non-negative")

    print(f"🔄 Running {config.method} on a {bundle.form} problem ({iterations} iterations)...")
    trace = run(config.method, bundle, start, iterations, stop_tol)

    output_dir, filename = _split_out(_first(args.out, config.out), settings.output_dir)
    path = OutputGenerator().save_trace_csv(trace, output_dir, filename)
    stop_note = " (stopped early)" if trace.stopped_early else ""
    print(f"✅ {trace.iterations_performed} iterations performed{stop_note}")
    if trace.residuals:
        print(f"   Final residual: {trace.residuals[-1]:.3e}")
    print(f"   Trace saved to: {path}")
    return EXIT_OK


def _first(*values):
    """First value that is not None."""
    for value in values:
        if value is not None:
            return value
    return None


def _start_vector(start: dict, key: str, theorem: str):
    if key not in start:
        raise ConfigurationError(f"theorem '{theorem}' needs [start] field '{key}'")
    return start[key]


def _sample_points(config, bundle: ProblemBundle) -> List[np.ndarray]:
    """Self-duality points: the config's explicit list, else seeded normal samples."""
    if config.points:
        return [np.asarray(p, dtype=float) for p in config.points]
    rng = np.random.default_rng(config.sample_seed)
    return list(rng.standard_normal((config.samples, bundle.dim_x)))


def run_verification(theorem: str, bundle: ProblemBundle, start: dict, config, n: int, tol: float, rel_tol: float) -> EquivalenceReport:
    """Dispatch one theorem tag to its verifier."""
    f, g, op = bundle.f, bundle.g, bundle.op
    if theorem == DR_ADMM:
        return verify_dr_admm(bundle, _start_vector(start, "x0", theorem), n, tol, rel_tol)
    if theorem == PR_ADMM_INTERMEDIATE:
        return verify_pr_admm_intermediate(bundle, _start_vector(start, "x0", theorem), n, tol, rel_tol)
    if theorem == ADMM_DR:
        return verify_admm_dr(
            bundle, _start_vector(start, "a0", theorem), _start_vector(start, "u0", theorem), n, tol, rel_tol
        )
    if theorem == ADMM_INTERMEDIATE_PR:
        return verify_admm_intermediate_pr(
            bundle, _start_vector(start, "a0", theorem), _start_vector(start, "u0", theorem), n, tol, rel_tol
        )
    if theorem == CP_DR_IDENTITY:
        return verify_cp_dr_identity_case(
            f, g, _start_vector(start, "u0", theorem), _start_vector(start, "v0", theorem), n, tol, rel_tol
        )
    if theorem == CP_DR_LIFTED:
        return verify_cp_lifted_dr(
            f, g, op, _start_vector(start, "u0", theorem), _start_vector(start, "v0", theorem), n, tol, rel_tol
        )
    if theorem == DYKSTRA_MAP_SUBSPACE:
        return verify_dykstra_subspace_closed_form(f, g, _start_vector(start, "x0", theorem), n, tol, rel_tol)
    if theorem == SELF_DUALITY:
        return verify_self_duality(f, g, _sample_points(config, bundle), tol, rel_tol)
    if theorem == SOLUTION_START:
        return verify_solution_start(f, g, _start_vector(start, "x0", theorem), n, tol, rel_tol)
    raise InvalidInputError(f"Unsupported theorem tag: {theorem}. Supported: {', '.join(THEOREMS)}")


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    """Run one verifier and write its report."""
    config = load_verify_config(args.config)
    bundle = build_problem(config.problem)
    start = resolve_start(bundle, config.start)

    n = _first(args.iters, config.iterations, settings.default_iterations)
    tol = _first(args.tol, config.tol, settings.verify_abs_tol)
    rel_tol = _first(config.rel_tol, settings.verify_rel_tol)
    if n < 0 or tol <= 0:
        raise ConfigurationError("iterations must be >= 0 and the tolerance > 0")

    print(f"🔍 Verifying {args.theorem} over {n} iterations...")
    try:
        report = run_verification(args.theorem, bundle, start, config, n, tol, rel_tol)
    except ConfigurationError:
        raise
    except InvalidInputError as e:
        # verifier preconditions map to exit 3
        raise NumericalError(str(e)) from e

    for i, (value, scale) in enumerate(zip(report.discrepancies, report.scales), start=1):
        mark = "ok" if value <= report.tolerance + report.rel_tol * scale else "FAIL"
        print(f"   iter {i:>4}: discrepancy {value:.3e} {mark}")

    generator = OutputGenerator()
    output_dir, filename = _split_out(_first(args.out, config.out), settings.output_dir)
    csv_path = generator.save_report_csv(report, output_dir, filename)
    print(
        f"   Max discrepancy: {report.max_discrepancy:.3e} "
        f"(tolerance {report.tolerance:.1e} + {report.rel_tol:.1e}·‖iterate‖ per iteration)"
    )
    print(f"   Per-iterate report saved to: {csv_path}")
    if settings.write_json_report:
        json_name = None if filename is None else f"{filename.rsplit('.', 1)[0]}.json"
        print(f"   JSON report saved to: {generator.save_json(report, output_dir, json_name)}")

    if report.passed:
        print(f"✅ {args.theorem}: pass")
        return EXIT_OK
    print(f"❌ {args.theorem}: FAIL (first at iteration {report.first_failure})")
    return EXIT_FAILED


def cmd_counterexample(args: argparse.Namespace, settings: Settings) -> int:
    """Compare MAP and Dykstra limits from (alpha, beta)."""
    if args.iters < 0:
        raise InvalidInputError(f"--iters must be >= 0, got {args.iters}")
    result = dykstra_map_counterexample(args.alpha, args.beta, args.iters)
    gap = float(np.linalg.norm(result.map_limit - result.dykstra_limit))

    print(f"📐 MAP vs Dykstra from ({args.alpha}, {args.beta}), {args.iters} iterations")
    print(f"   MAP limit:     {_vector_text(result.map_limit)}")
    print(f"   Dykstra limit: {_vector_text(result.dykstra_limit)}")
    print(f"   Separation:    {gap:.6g}")

    if args.out:
        output_dir, filename = _split_out(args.out, settings.output_dir)
        path = OutputGenerator().save_sequences_csv(
            {"map": result.map_iterates, "dykstra": result.dykstra_iterates}, output_dir, filename, "counterexample"
        )
        print(f"   Iterates saved to: {path}")

    if result.distinct:
        print("✅ Limits differ: MAP does not find the nearest feasible point")
        return EXIT_OK
    print("⚠️  Limits coincide")
    return EXIT_FAILED


COMMANDS = {"run": cmd_run, "verify": cmd_verify, "counterexample": cmd_counterexample}


def main(argv: Optional[List[str]] = None) -> int:
    """Main execution function."""
    args = build_parser().parse_args(argv)

    try:
        settings = load_settings()
        if args.log_level:
            settings = settings.model_copy(update={"log_level": normalize_log_level(args.log_level)})
    except (ConfigurationError, ValueError) as error:
        print(f"❌ Error: {error}", file=sys.stderr)
        return EXIT_BAD_INPUT

    logging.basicConfig(level=settings.log_level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args, settings)
    except InvalidInputError as error:
        print(f"❌ Error: {error}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NumericalError as error:
        print(f"❌ Numerical failure: {error}", file=sys.stderr)
        return EXIT_NUMERICAL
    except SplittingError as error:
        print(f"❌ Error: {error}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
