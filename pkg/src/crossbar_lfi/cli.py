"""
Command-line entry point.

    crossbar-lfi [--config PATH] [--preset NAME] [--seed N] [--out DIR]
                 [--backend ideal|mna] [--log-level LEVEL] SUBCOMMAND

Subcommands write their CSV tables and text reports into the output directory
once, at the end of a successful run, and print a one-line summary per
result. Diagnostics go to stderr through logging; the exit status is nonzero
with a distinct value per error class.
"""

import logging
import sys
import traceback
from typing import Any, Dict, Optional

import click
from dotenv import load_dotenv

from .config import ExperimentConfig, apply_overrides, load_config, parse_config
from .handlers import COMMANDS, CommandContext
from .utils.error_handling import UnknownCommandError, classify_error, exit_code_for
from .utils.logging import log_run_context, setup_logging

logger = logging.getLogger(__name__)


def run_command(
    name: str, config: ExperimentConfig, results: Optional[Dict[str, Any]] = None
) -> int:
    """
    Run one subcommand and write its artifacts.

    Args:
        name: Subcommand name, one of COMMANDS
        config: Validated experiment configuration
        results: Optional mapping that receives the handler's result

    Returns:
        0 on success, otherwise the exit status of the error class
    """
    try:
        handler = COMMANDS.get(name)
        if handler is None:
            raise UnknownCommandError(
                f"Unknown subcommand '{name}', expected one of {sorted(COMMANDS)}"
            )
        log_run_context(
            name,
            {
                "preset": config.preset,
                "seed": config.seed,
                "backend": config.backend,
                "output_dir": config.output_dir,
            },
        )
        ctx = CommandContext.from_config(config)
        result = handler(ctx)
        result["artifacts"] = [str(p) for p in ctx.writer.flush()]
        if results is not None:
            results.update(result)
        return 0
    except Exception as e:
        error_type = classify_error(e)
        logger.error(f"{name} failed ({error_type.value}): {e}")
        logger.debug(f"Traceback: {traceback.format_exc()}")
        return exit_code_for(e)


def _echo_summary(results: Dict[str, Any]) -> None:
    for key, value in results.items():
        if key == "artifacts":
            for path in value:
                click.echo(f"wrote {path}")
        elif isinstance(value, float):
            click.echo(f"{key}: {value:.6g}")
        else:
            click.echo(f"{key}: {value}")


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), help="YAML experiment config")
@click.option(
    "--preset",
    type=click.Choice(["paper-linear", "paper-weak-nonlinear", "paper-TEAM", "custom"]),
    help="Override the config preset",
)
@click.option("--seed", type=int, help="Override the random seed")
@click.option("--out", "output_dir", type=click.Path(file_okay=False), help="Output directory")
@click.option("--backend", type=click.Choice(["ideal", "mna"]), help="Crossbar solver backend")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Log level (defaults to LOG_LEVEL or INFO)",
)
@click.pass_context
def main(
    ctx: click.Context,
    config_path: Optional[str],
    preset: Optional[str],
    seed: Optional[int],
    output_dir: Optional[str],
    backend: Optional[str],
    log_level: Optional[str],
) -> None:
    """Laser fault injection on memristive crossbars."""
    load_dotenv()
    setup_logging(level=log_level.upper() if log_level else None)
    ctx.obj = {
        "config_path": config_path,
        "overrides": {
            "preset": preset,
            "seed": seed,
            "output_dir": output_dir,
            "backend": backend,
        },
    }


def _resolve_config(ctx: click.Context) -> ExperimentConfig:
    config_path = ctx.obj["config_path"]
    config = load_config(config_path) if config_path else parse_config("")
    return apply_overrides(config, **ctx.obj["overrides"])


def _run(ctx: click.Context, name: str) -> None:
    try:
        config = _resolve_config(ctx)
    except Exception as e:
        logger.error(f"Invalid configuration: {e}")
        ctx.exit(exit_code_for(e))
        return
    results: Dict[str, Any] = {}
    status = run_command(name, config, results)
    if status == 0:
        _echo_summary(results)
    ctx.exit(status)


def _register(name: str, help_text: str) -> None:
    @main.command(name=name, help=help_text)
    @click.pass_context
    def command(ctx: click.Context) -> None:
        _run(ctx, name)


_register("table1", "Reproduce the fault table on the simulated crossbar.")
_register("calibrate", "Fit the slope-to-resistance calibration and report a, b.")
_register("estimate", "Estimate cells of known resistance (validation cases).")
_register("scan-extract", "Recover a region's resistances from an overlapping scan.")
_register("hysteresis", "Trace the I-V loop of a sinusoidal current sweep.")
_register("corrupt", "Report the resistance shift caused by fault drives.")
_register("impact", "Measure inference deviation after corrupting cells.")


if __name__ == "__main__":
    sys.exit(main())
