"""Command-line entry point: ``python -m mlsemigroup.main <command> [flags]``.

Every command builds a ``Table`` and writes it as CSV (default) or JSON to
stdout or ``--output``. Exit status: 0 on success, 1 on a domain or evaluation
error, 2 on a usage error.
"""

import argparse
import contextlib
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from . import __version__
from .config import get_settings
from .exceptions import MLError
from .models import Command, OutputFormat
from .schemas import REQUIRED_PARAMETERS, GridSpec, MLParams, RunConfig, SeriesConfig, Table
from .services.calculus import caputo_l1_residual
from .services.matrix_ml import eig_symmetric, matrix_defect_grid, read_matrix_csv
from .services.mlf_core import ml_at_time, ml_e2, ml_value
from .services.semigroup import (
    classify_sweep,
    defect,
    defect_grid,
    exponential_fit,
    judge_sup,
    proof_trace_lambda,
    proof_trace_slope,
    semigroup_expected,
)
from .services.serializer import TableSerializer

logger = logging.getLogger(__name__)

Handler = Callable[[Dict[str, Any], SeriesConfig], Table]

_OUTPUT_KEYS = ("command", "output_format", "output")


def _params(parameters: Dict[str, Any]) -> MLParams:
    return MLParams(alpha=parameters["alpha"], lam=parameters.get("lam") or 0.0)


def _grid_rows(grid) -> List[List[Any]]:
    return [[t, s, d] for t, s, d in grid.cells()]


def handle_eval(parameters: Dict[str, Any], cfg: SeriesConfig) -> Table:
    alpha, beta, z = parameters["alpha"], parameters["beta"], parameters["z"]
    result = ml_e2(alpha, beta, z, cfg)
    return Table(
        columns=["alpha", "beta", "z", "value", "error_estimate", "terms_used", "converged", "method"],
        rows=[[alpha, beta, z, result.value, result.error_estimate, result.terms_used,
               result.converged, result.method]],
    )


def handle_defect(parameters: Dict[str, Any], cfg: SeriesConfig) -> Table:
    p = _params(parameters)
    t, s = parameters["t"], parameters["s"]
    return Table(
        columns=["alpha", "lambda", "t", "s", "defect"],
        rows=[[p.alpha, p.lam, t, s, defect(p, t, s, cfg)]],
    )


def handle_grid(parameters: Dict[str, Any], cfg: SeriesConfig) -> Table:
    p = _params(parameters)
    values = GridSpec(t_min=parameters["tmin"], t_max=parameters["tmax"], n=parameters["n"]).values()
    grid = defect_grid(p, values, values, cfg)
    return Table(columns=["t", "s", "defect"], rows=_grid_rows(grid), summary={"sup_abs": grid.sup_abs})


def handle_classify(parameters: Dict[str, Any], cfg: SeriesConfig) -> Table:
    p = _params(parameters)
    spec = GridSpec(t_min=parameters["tmin"], t_max=parameters["tmax"], n=parameters["n"])
    verdict, grid = classify_sweep(p, spec, parameters["tol"], parameters["threshold"], cfg)
    return Table(
        columns=["alpha", "lambda", "sup_abs", "verdict", "expected"],
        rows=[[p.alpha, p.lam, grid.sup_abs, verdict, semigroup_expected(p)]],
    )


def handle_matrix(parameters: Dict[str, Any], cfg: SeriesConfig) -> Table:
    alpha = MLParams(alpha=parameters["alpha"]).alpha
    spectrum = eig_symmetric(read_matrix_csv(parameters["matrix"]))
    values = GridSpec(t_min=parameters["tmin"], t_max=parameters["tmax"], n=parameters["n"]).values()
    grid = matrix_defect_grid(alpha, spectrum, values, values, cfg)
    verdict = judge_sup(grid.sup_abs, parameters["tol"], parameters["threshold"])
    return Table(
        columns=["t", "s", "defect"],
        rows=_grid_rows(grid),
        summary={"sup_abs": grid.sup_abs, "verdict": verdict},
    )


def handle_caputo_check(parameters: Dict[str, Any], cfg: SeriesConfig) -> Table:
    p = _params(parameters)
    report = caputo_l1_residual(p, parameters["u0"], parameters["T"], parameters["n"], cfg)
    return Table(
        columns=["alpha", "lambda", "grid_steps", "max_residual", "refined_residual",
                 "empirical_order", "converged"],
        rows=[[p.alpha, p.lam, report.grid_steps, report.max_residual, report.refined_residual,
               report.empirical_order, report.converged]],
    )


def handle_fit(parameters: Dict[str, Any], cfg: SeriesConfig) -> Table:
    p = _params(parameters)
    fit = exponential_fit(lambda t: ml_value(ml_at_time(p, t, cfg)), parameters["T"], parameters["samples"])
    return Table(columns=["omega", "residual"], rows=[[fit.omega, fit.residual]])


def handle_trace(parameters: Dict[str, Any], cfg: SeriesConfig) -> Table:
    p = _params(parameters)
    omega = parameters["omega"]
    times = [float(t) for t in np.logspace(0, -parameters["kmax"], parameters["kmax"] + 1)]
    rows = [[t, proof_trace_lambda(p, omega, t, cfg)] for t in times]
    summary = {"slope": proof_trace_slope(p, omega, times, cfg)} if omega != 0.0 else {}
    return Table(columns=["t", "lambda_estimate"], rows=rows, summary=summary)


HANDLERS: Dict[Command, Handler] = {
    Command.EVAL: handle_eval,
    Command.DEFECT: handle_defect,
    Command.GRID: handle_grid,
    Command.CLASSIFY: handle_classify,
    Command.MATRIX: handle_matrix,
    Command.CAPUTO_CHECK: handle_caputo_check,
    Command.FIT: handle_fit,
    Command.TRACE: handle_trace,
}


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--output-format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value
    )
    parser.add_argument("--output", default=None, help="write to this file instead of stdout")


def _add_parameter(parser: argparse.ArgumentParser, name: Command, option: str, dest: str, **kwargs: Any) -> None:
    """A parameter flag, required exactly when REQUIRED_PARAMETERS lists it for the command."""
    required = dest in REQUIRED_PARAMETERS[name]
    if required:
        kwargs.pop("default", None)
    parser.add_argument(option, dest=dest, required=required, **kwargs)


def _add_sweep_flags(
    parser: argparse.ArgumentParser, name: Command, t_min: float, t_max: Optional[float], n: Optional[int]
) -> None:
    _add_parameter(parser, name, "--tmin", "tmin", type=float, default=t_min)
    _add_parameter(parser, name, "--tmax", "tmax", type=float, default=t_max)
    _add_parameter(parser, name, "--n", "n", type=int, default=n, help="grid points per axis")


def _add_band_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=1e-9, help="sup |defect| at or below this: HOLDS")
    parser.add_argument("--threshold", type=float, default=1e-3, help="sup |defect| at or above this: FAILS")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlsemigroup",
        description="Mittag-Leffler evaluation and semigroup-defect sweeps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def command(name: Command, help_text: str, lam: bool = True) -> argparse.ArgumentParser:
        sub = commands.add_parser(name.value, help=help_text)
        _add_parameter(sub, name, "--alpha", "alpha", type=float, help="order in (0, 1]")
        if lam:
            _add_parameter(sub, name, "--lambda", "lam", type=float, default=0.0)
        _add_output_flags(sub)
        return sub

    sub = command(Command.EVAL, "evaluate E_{alpha,beta}(z)", lam=False)
    _add_parameter(sub, Command.EVAL, "--beta", "beta", type=float, default=1.0)
    _add_parameter(sub, Command.EVAL, "--z", "z", type=float)

    sub = command(Command.DEFECT, "semigroup defect at one (t, s)")
    _add_parameter(sub, Command.DEFECT, "--t", "t", type=float)
    _add_parameter(sub, Command.DEFECT, "--s", "s", type=float)

    sub = command(Command.GRID, "defect on the square grid linspace(tmin, tmax, n)")
    _add_sweep_flags(sub, Command.GRID, t_min=0.0, t_max=None, n=None)

    sub = command(Command.CLASSIFY, "HOLDS/FAILS verdict from the sup of the defect grid")
    _add_sweep_flags(sub, Command.CLASSIFY, t_min=0.25, t_max=2.0, n=8)
    _add_band_flags(sub)

    sub = command(Command.MATRIX, "matrix defect grid for a symmetric matrix read from CSV", lam=False)
    _add_parameter(sub, Command.MATRIX, "--matrix", "matrix", help="row-major comma-separated square matrix")
    _add_sweep_flags(sub, Command.MATRIX, t_min=0.25, t_max=2.0, n=8)
    _add_band_flags(sub)

    sub = command(Command.CAPUTO_CHECK, "L1 residual of the Caputo problem at n and 2n steps")
    _add_parameter(sub, Command.CAPUTO_CHECK, "--n", "n", type=int, help="number of time steps")
    _add_parameter(sub, Command.CAPUTO_CHECK, "--u0", "u0", type=float, default=1.0)
    _add_parameter(sub, Command.CAPUTO_CHECK, "--T", "T", type=float, default=1.0)

    sub = command(Command.FIT, "fit exp(omega t) to E_alpha(lambda t**alpha)")
    _add_parameter(sub, Command.FIT, "--T", "T", type=float, default=5.0)
    _add_parameter(sub, Command.FIT, "--samples", "samples", type=int, default=101)

    sub = command(Command.TRACE, "isolated lambda along t = 10**-k")
    _add_parameter(sub, Command.TRACE, "--omega", "omega", type=float)
    _add_parameter(sub, Command.TRACE, "--kmax", "kmax", type=int, default=6)

    return parser


def _configure_logging(level: str) -> None:
    package_logger = logging.getLogger("mlsemigroup")
    package_logger.setLevel(getattr(logging, level.upper(), logging.WARNING))
    if not any(isinstance(h, logging.StreamHandler) for h in package_logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        package_logger.addHandler(handler)


def _field_name(exc: ValidationError) -> str:
    errors = exc.errors()
    if not errors:
        return "input"
    location = ".".join(str(part) for part in errors[0]["loc"])
    return location or "input"


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        # argparse writes usage and help to sys.stderr / sys.stdout
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    parameters = {k: v for k, v in vars(args).items() if k not in _OUTPUT_KEYS}
    try:
        config = RunConfig(
            command=args.command,
            parameters=parameters,
            output_format=args.output_format,
            output_path=args.output,
        )
    except ValidationError as exc:
        message = exc.errors()[0]["msg"] if exc.errors() else str(exc)
        print(f"usage error: {message}", file=stderr)
        return 2

    try:
        settings = get_settings()
        _configure_logging(settings.LOG_LEVEL)
        logger.info("running %s with %s", config.command.value, config.parameters)
        table = HANDLERS[config.command](config.parameters, settings.series_config())
    except MLError as exc:
        print(f"error: {exc}", file=stderr)
        return exc.exit_code
    except ValidationError as exc:
        message = exc.errors()[0]["msg"] if exc.errors() else str(exc)
        print(f"error: {_field_name(exc)}: {message}", file=stderr)
        return 1

    text = TableSerializer.render(table, config.output_format, version=__version__)
    try:
        TableSerializer.write(text, config.output_path, stdout)
    except OSError as exc:
        print(f"error: output: {exc}", file=stderr)
        return 1
    return 0


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
