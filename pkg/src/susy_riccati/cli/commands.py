"""Argument parser and dispatch for the susy-riccati command."""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from .. import __version__
from ..analysis.models import ModelParams
from ..config import (
    DEFAULT_EXCLUDED_RADIUS,
    ODE_ATOL,
    ODE_RTOL,
    BracketVariant,
    CutSide,
    HypergeometricConvention,
    ReductionIntegration,
    Settings,
)
from ..utils.logging import RunContext, get_logger
from ..utils.validators import parse_complex, parse_grid_spec, validate_kappa
from .report import build_report, render_output, render_summary
from .runs import RUNNERS, RunConfig, RunResult
from .suites import SUITE_NAMES, run_suites

logger = get_logger(__name__)

DEFAULT_GRID = "0.1:1.3:400"

# flag dest -> ModelParams field
PARAM_FLAGS: Dict[str, str] = {
    "kappa": "kappa",
    "c": "c",
    "phi": "phase_phi",
    "W": "amp_W",
    "d": "phase_d",
    "lam": "lam",
    "K": "K",
    "K1": "K1",
    "K2": "K2",
    "k": "k",
    "A": "A",
    "B": "B",
    "C": "C",
    "D": "D",
}


def _parameter_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)

    group = parser.add_argument_group("model parameters")
    group.add_argument("--kappa", type=validate_kappa, help="Branch sign, +1 or -1")
    group.add_argument("--c", type=float, help="Riccati coefficient c (nonzero)")
    group.add_argument("--phi", type=float, help="Seed phase phi (kappa=+1)")
    group.add_argument("--W", type=float, help="Seed amplitude W (> 0)")
    group.add_argument("--d", type=float, help="Phase d of the fermionic partner")
    group.add_argument(
        "--lambda", dest="lam", type=float, help="Darboux family parameter (> 0)"
    )
    group.add_argument("--K", type=float, help="D2 coupling constant (>= 0)")
    group.add_argument("--K1", type=float, help="D3 constant K1 (>= 0)")
    group.add_argument("--K2", type=float, help="D3 constant K2 (>= 0)")
    group.add_argument("--k", type=float, help="Reduction-of-order constant")
    for name in ("A", "B", "C", "D"):
        group.add_argument(
            f"--{name}", type=parse_complex, help=f"Hypergeometric coefficient {name}"
        )

    output = parser.add_argument_group("grid and output")
    output.add_argument(
        "--grid",
        default=DEFAULT_GRID,
        help=f"Grid start:end:n with inclusive endpoints (default: {DEFAULT_GRID})",
    )
    output.add_argument(
        "--output", choices=["csv", "json"], default="csv", help="Output format"
    )
    output.add_argument("--output-path", type=Path, help="Write output here instead of stdout")
    output.add_argument("--quiet", action="store_true", help="Skip the summary table")

    numerics = parser.add_argument_group("numerics")
    numerics.add_argument(
        "--excluded-radius",
        type=float,
        default=DEFAULT_EXCLUDED_RADIUS,
        help="Minimum distance from a singular point",
    )
    numerics.add_argument("--rtol", type=float, default=ODE_RTOL, help="Integrator rtol")
    numerics.add_argument("--atol", type=float, default=ODE_ATOL, help="Integrator atol")
    numerics.add_argument(
        "--d2-bracket-variant",
        choices=[v.value for v in BracketVariant],
        default=BracketVariant.AS_PRINTED.value,
        help="Placement of i on the K-terms of the D3 second-order equations",
    )
    numerics.add_argument(
        "--eq24-integration",
        choices=[v.value for v in ReductionIntegration],
        default=ReductionIntegration.ETA.value,
        help="Integration variable of the reduction-of-order integral",
    )
    numerics.add_argument(
        "--hypergeometric-convention",
        choices=[v.value for v in HypergeometricConvention],
        default=HypergeometricConvention.CORRECTED.value,
        help="Parameter convention of the hypergeometric D2 solutions",
    )
    numerics.add_argument(
        "--ln-minus-one-branch",
        type=int,
        default=0,
        help="Branch n of ln(-1) = i*pi*(2n+1)",
    )
    numerics.add_argument(
        "--cut-side",
        choices=["upper", "lower"],
        default="upper",
        help="Side of the 2F1 branch cut for arguments on it",
    )

    logs = parser.add_argument_group("logging")
    logs.add_argument("--log-level", default="WARNING", help="Logging level")
    logs.add_argument(
        "--log-structured",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="Structured console logging (otherwise rich handler)",
    )
    return parser


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per evaluation plus verify."""
    parent = _parameter_parser()
    parser = argparse.ArgumentParser(
        prog="susy-riccati",
        description="Evaluate and verify Riccati closed forms, Darboux families and "
        "Dirac-like systems",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    subparsers.add_parser(
        "closed-form", parents=[parent], help="u_p, w_seed, c_f and w_f on a grid"
    )
    subparsers.add_parser("family", parents=[parent], help="Darboux family u_g, c_family, w_g")
    subparsers.add_parser("dirac1", parents=[parent], help="Zero-mass D1 spinor")
    subparsers.add_parser("dirac2", parents=[parent], help="Hypergeometric D2 spinor")

    dirac3 = subparsers.add_parser("dirac3", parents=[parent], help="Numerical D3 spinor")
    dirac3.add_argument("--w1-0", type=parse_complex, help="w1 at the first grid point")
    dirac3.add_argument("--w2-0", type=parse_complex, help="w2 at the first grid point")

    verify = subparsers.add_parser("verify", parents=[parent], help="Run acceptance suites")
    verify.add_argument(
        "--suite",
        action="append",
        choices=SUITE_NAMES,
        help="Suite to run (repeatable; default: all)",
    )
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Build a validated RunConfig from parsed flags.

    Raises:
        ConfigurationError: If the grid specification is malformed
        pydantic.ValidationError: If a parameter or setting is out of range
    """
    given: Dict[str, Any] = {
        field: getattr(args, flag)
        for flag, field in PARAM_FLAGS.items()
        if getattr(args, flag) is not None
    }
    params = ModelParams(**given)

    settings = Settings(
        log_level=args.log_level,
        log_structured=args.log_structured,
        excluded_radius=args.excluded_radius,
        ode_rtol=args.rtol,
        ode_atol=args.atol,
        bracket_variant=BracketVariant(args.d2_bracket_variant),
        reduction_integration=ReductionIntegration(args.eq24_integration),
        hypergeometric_convention=HypergeometricConvention(args.hypergeometric_convention),
        ln_minus_one_branch=args.ln_minus_one_branch,
        cut_side=CutSide.UPPER if args.cut_side == "upper" else CutSide.LOWER,
    )

    suites: List[str] = list(getattr(args, "suite", None) or [])
    return RunConfig(
        subcommand=args.subcommand,
        params=params,
        grid=parse_grid_spec(args.grid),
        output_format=args.output,
        output_path=args.output_path,
        settings=settings,
        suites=tuple(suites),
        w1_0=getattr(args, "w1_0", None),
        w2_0=getattr(args, "w2_0", None),
        quiet=args.quiet,
    )


def _report_path(path: Path) -> Path:
    return path.with_name(f"{path.stem}.report.json")


def execute(config: RunConfig, stdout: Optional[TextIO] = None) -> int:
    """Run one subcommand and write its artifacts.

    A CSV run written to a file also writes the JSON report next to it.

    Returns:
        0 if every check passed, 1 otherwise
    """
    stdout = stdout or sys.stdout
    with RunContext(subcommand=config.subcommand):
        logger.info("Run started", grid=config.grid, output=config.output_format)

        result: RunResult
        if config.subcommand == "verify":
            result = run_suites(config, config.suites)
        else:
            result = RUNNERS[config.subcommand](config)

        text = render_output(config.subcommand, config.params, result, config.output_format)
        if config.output_path is None:
            stdout.write(text)
        else:
            config.output_path.write_text(text)
            if config.output_format == "csv" and config.subcommand != "verify":
                checks_only = result.model_copy(update={"columns": {}})
                report = render_output(config.subcommand, config.params, checks_only, "json")
                _report_path(config.output_path).write_text(report)
            logger.info("Wrote output", path=str(config.output_path))

        if not config.quiet:
            render_summary(
                build_report(config.subcommand, config.params, result.checks, result.variants)
            )

        logger.info("Run finished", passed=result.passed, checks=len(result.checks))
        return 0 if result.passed else 1
