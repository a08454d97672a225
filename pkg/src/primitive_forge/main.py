"""
Main entry point for Primitive Forge.

Subcommands:
    construct  emit Phi_n segments + certificate (+ evaluations with --eval)
    integrate  emit Phi_n(b) + certificate
    table      emit one row per level for convergence inspection

Exit codes: 0 when the tolerance is met, 2 when it is not, 1 on input errors.
"""

import functools
import logging
import math
import sys
from pathlib import Path
from typing import Any, Callable, List, Literal, Optional, Sequence, Tuple

import click
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, model_validator
from rich.console import Console

from . import __version__
from .config import ForgeSettings, load_settings
from .construction.oscillation import RigorMode
from .construction.partition import ABSOLUTE_MAX_LEVEL
from .engine import construct_antiderivative, convergence_table, definite_integral
from .errors import ConfigurationError, ForgeError
from .expr import parse
from .utils.export import (
    construction_payload,
    integral_payload,
    render,
    table_payload,
    write_output,
)
from .utils.logging import setup_logging

err_console = Console(stderr=True, soft_wrap=True, highlight=False)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_TOLERANCE_UNMET = 2


class RunConfig(BaseModel):
    """One validated CLI invocation."""

    subcommand: Literal["construct", "integrate", "table"]
    expression: str = Field(..., min_length=1)
    a: float
    b: float
    tolerance: float = Field(..., gt=0)
    max_level: int = Field(..., ge=1, le=ABSOLUTE_MAX_LEVEL)
    level: Optional[int] = Field(default=None, ge=1)
    samples: int = Field(..., ge=2)
    lipschitz: Optional[float] = Field(default=None, ge=0, allow_inf_nan=False)
    output_format: Literal["json", "csv"] = "json"
    eval_points: List[float] = Field(default_factory=list)
    out: Optional[Path] = None

    @model_validator(mode="after")
    def _check_ranges(self) -> "RunConfig":
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"interval must be finite with a < b, got [{self.a}, {self.b}]")
        if not math.isfinite(self.tolerance):
            raise ValueError("tolerance must be finite")
        if self.level is not None and self.level > self.max_level:
            raise ValueError(f"--level {self.level} exceeds --max-level {self.max_level}")
        for x in self.eval_points:
            if not self.a <= x <= self.b:
                raise ValueError(f"eval point {x!r} is outside [{self.a}, {self.b}]")
        return self

    @property
    def rigor(self) -> RigorMode:
        if self.lipschitz is None:
            return RigorMode.sampled()
        return RigorMode.lipschitz_inflated(self.lipschitz)


def _one_line(message: str) -> str:
    return "; ".join(part.strip() for part in message.splitlines() if part.strip())


def _parse_points(raw: Optional[str]) -> List[float]:
    if not raw:
        return []
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError as e:
        raise ConfigurationError(f"--eval expects comma-separated numbers: {e}") from e


def _build_config(subcommand: str, settings: ForgeSettings, **options: Any) -> RunConfig:
    interval: Tuple[float, float] = options.pop("interval")
    try:
        return RunConfig(
            subcommand=subcommand,
            expression=options["expr"],
            a=interval[0],
            b=interval[1],
            tolerance=options["tol"],
            max_level=options["max_level"] or settings.max_level,
            level=options.get("level"),
            samples=options["samples"] or settings.samples,
            lipschitz=options["lipschitz"],
            output_format=options["output_format"],
            eval_points=_parse_points(options.get("eval_points")),
            out=options["out"],
        )
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'input'}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigurationError(f"Invalid arguments: {details}") from e


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text)
    else:
        write_output(text, out)


def _guarded(command: Callable[..., int]) -> Callable[..., None]:
    """Map library errors to a one-line diagnostic and the documented exit codes."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        ctx = click.get_current_context()
        try:
            code = command(*args, **kwargs)
        except ForgeError as e:
            err_console.print(f"error: {_one_line(str(e))}", style="red", markup=False)
            ctx.exit(EXIT_INPUT_ERROR)
        ctx.exit(code)

    return wrapper


def _common_options(command: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option("--expr", "expr", required=True, help="Expression for f, e.g. 'exp(x)*cos(x)'"),
        click.option("--interval", "interval", type=float, nargs=2, required=True,
                     metavar="A B", help="Closed interval [A, B]"),
        click.option("--tol", "tol", type=float, default=1e-4, show_default=True,
                     help="Uniform tolerance for the error bound"),
        click.option("--max-level", "max_level", type=int, default=None,
                     help="Highest level (default: PRIMITIVE_FORGE_MAX_LEVEL or 24)"),
        click.option("--samples", "samples", type=int, default=None,
                     help="Sub-samples per member (default: PRIMITIVE_FORGE_SAMPLES or 16)"),
        click.option("--lipschitz", "lipschitz", type=float, default=None,
                     help="Lipschitz constant L; makes the bound certified"),
        click.option("--format", "output_format", type=click.Choice(["json", "csv"]),
                     default="json", show_default=True, help="Output format"),
        click.option("--out", "out", type=click.Path(dir_okay=False, path_type=Path),
                     default=None, help="Write output to PATH instead of stdout"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


@click.group()
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Configuration file (JSON or YAML)"
)
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]),
    default=None,
    help="Logging level (default: PRIMITIVE_FORGE_LOG_LEVEL or WARNING)"
)
@click.option(
    "--log-file",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Also write log records to this file"
)
@click.option("--plain-log", is_flag=True, help="Plain stderr log lines instead of Rich output")
@click.version_option(version=__version__, prog_name="Primitive Forge")
@click.pass_context
def cli(
    ctx: click.Context,
    config: Optional[Path],
    log_level: Optional[str],
    log_file: Optional[Path],
    plain_log: bool,
) -> None:
    """
    Primitive Forge - Antiderivatives of continuous functions with certified error bounds.

    f is interpolated linearly on dyadic partitions of [A, B], the interpolant
    is integrated exactly, and the partition is refined until the oscillation
    bound meets the tolerance.
    """
    load_dotenv()
    try:
        settings = load_settings(config)
    except ForgeError as e:
        err_console.print(f"error: {_one_line(str(e))}", style="red", markup=False)
        ctx.exit(EXIT_INPUT_ERROR)
    setup_logging(level=log_level or settings.log_level, log_file=log_file, use_rich=not plain_log)
    logger.debug(f"Settings: {settings.model_dump()}")
    ctx.obj = settings


@cli.command()
@_common_options
@click.option("--level", "level", type=int, default=None,
              help="Build exactly this level, bypassing the stopping rule")
@click.option("--eval", "eval_points", default=None, metavar="X1,X2,...",
              help="Evaluate Phi_n and the pointwise bound at these points")
@click.pass_obj
@_guarded
def construct(settings: ForgeSettings, **options: Any) -> int:
    """Construct Phi_n and emit its segments and certificate."""
    config = _build_config("construct", settings, **options)
    expr = parse(config.expression)
    pq, cert = construct_antiderivative(
        expr, config.a, config.b, config.tolerance,
        max_level=config.max_level, rigor=config.rigor, samples=config.samples,
        level=config.level, chunk_size=settings.chunk_size,
        materialize_limit=settings.materialize_limit,
    )
    payload = construction_payload(pq, cert, str(expr), config.eval_points)
    _emit(render(payload, config.output_format), config.out)
    return EXIT_OK if cert.met else EXIT_TOLERANCE_UNMET


@cli.command()
@_common_options
@click.option("--level", "level", type=int, default=None,
              help="Use exactly this level, bypassing the stopping rule")
@click.pass_obj
@_guarded
def integrate(settings: ForgeSettings, **options: Any) -> int:
    """Emit the definite integral Phi_n(B) and its certificate."""
    config = _build_config("integrate", settings, **options)
    expr = parse(config.expression)
    value, cert = definite_integral(
        expr, config.a, config.b, config.tolerance,
        max_level=config.max_level, rigor=config.rigor, samples=config.samples,
        level=config.level, chunk_size=settings.chunk_size,
    )
    _emit(render(integral_payload(value, cert, str(expr)), config.output_format), config.out)
    return EXIT_OK if cert.met else EXIT_TOLERANCE_UNMET


@cli.command()
@_common_options
@click.pass_obj
@_guarded
def table(settings: ForgeSettings, **options: Any) -> int:
    """Emit one row per level 1..max-level: oscillation, bound and Phi_n(B)."""
    config = _build_config("table", settings, **options)
    expr = parse(config.expression)
    rows = convergence_table(
        expr, config.a, config.b, config.tolerance,
        max_level=config.max_level, rigor=config.rigor, samples=config.samples,
        chunk_size=settings.chunk_size,
    )
    payload = table_payload(rows, str(expr), config.a, config.b)
    _emit(render(payload, config.output_format), config.out)
    return EXIT_OK if rows[-1].met else EXIT_TOLERANCE_UNMET


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI and return its exit code instead of exiting.

    Usage errors (missing or malformed flags) map to exit code 1 like any
    other input error.
    """
    try:
        result = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="primitive-forge",
            standalone_mode=False,
        )
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        err_console.print(f"error: {_one_line(e.format_message())}", style="red", markup=False)
        return EXIT_INPUT_ERROR
    except click.exceptions.Abort:
        err_console.print("Aborted", style="yellow", markup=False)
        return EXIT_INPUT_ERROR
    return result if isinstance(result, int) else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
