import sys
from typing import Any, Dict, List, Optional, Sequence

import click
import numpy as np

from config.settings import settings
from models.entities import Grid, RunConfig
from models.errors import DimensionError, DomainError, LoscError
from oscillator import bg_states, gk_states
from utils.logger import logger
from utils.output import render, write_atomic
from verify.suites import SUITES, VerificationRunner

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

VERIFY_COLUMNS = ("kind", "name", "computed", "expected", "rel_error", "passed", "diagnostic")
TABLE_COLUMNS = (
    "J",
    "mean_H",
    "mean_n_series",
    "mean_n_elliptic",
    "mean_n2_series",
    "mean_n2_elliptic",
    "variance",
    "mandel_Q",
)
EVAL_COLUMNS = ("kind", "n", "x", "re", "im", "closed_re", "closed_im", "abs_diff")
OVERLAP_COLUMNS = ("i", "j", "re", "im", "direct_re", "direct_im", "abs_diff")


def parse_complex(text: str) -> complex:
    """Parse RE or RE,IM into a complex number."""
    parts = text.split(",")
    if len(parts) > 2:
        raise ValueError(f"complex value {text!r} must look like RE or RE,IM")
    return complex(float(parts[0]), float(parts[1]) if len(parts) == 2 else 0.0)


def emit(config: RunConfig, rows: List[Dict[str, Any]], columns: Sequence[str]) -> None:
    text = render(rows, columns, config.output_format, config.meta())
    if config.output_path is None:
        click.echo(text, nl=False)
    else:
        write_atomic(text, config.output_path)


def cmd_verify(config: RunConfig) -> int:
    report = VerificationRunner(config).run(config.only or None)
    rows = [{"kind": "check", **check.model_dump()} for check in report.checks]
    rows += [
        {
            "kind": "finding",
            "name": finding.name,
            "computed": finding.computed,
            "expected": finding.printed,
            "diagnostic": finding.message,
        }
        for finding in report.findings
    ]
    emit(config, rows, VERIFY_COLUMNS)
    for check in report.failures:
        logger.error(f"FAILED {check.name}: {check.diagnostic or check.rel_error}")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_table(config: RunConfig) -> int:
    grid = config.grid_j or Grid(start=0.0, stop=0.45, count=10)
    rows = []
    for J in grid.points():
        J = float(J)
        delta_n, mandel = gk_states.gk_variance_and_mandel(J)
        rows.append(
            {
                "J": J,
                "mean_H": gk_states.gk_mean_H(J),
                "mean_n_series": gk_states.gk_mean_n(J),
                "mean_n_elliptic": gk_states.gk_mean_n_elliptic(J) if J > 0 else 0.0,
                "mean_n2_series": gk_states.gk_mean_n2(J),
                "mean_n2_elliptic": gk_states.gk_mean_n2_elliptic(J) if J > 0 else 0.0,
                "variance": delta_n * delta_n,
                "mandel_Q": mandel,
            }
        )
    emit(config, rows, TABLE_COLUMNS)
    return EXIT_OK


def _amplitude_rows(amplitudes: np.ndarray) -> List[Dict[str, Any]]:
    return [
        {"kind": "amplitude", "n": n, "re": float(value.real), "im": float(value.imag)}
        for n, value in enumerate(amplitudes)
    ]


def cmd_eval(config: RunConfig) -> int:
    if config.z:
        z = config.z[0]
        state = bg_states.bg_state(z, config.truncation)
        rows = _amplitude_rows(state.amplitudes)
        grid = config.grid_x or Grid(start=-0.9, stop=0.9, count=5)
        for x in grid.points():
            x = float(x)
            series = bg_states.bg_wavefunction_series(state, x)
            closed = bg_states.bg_wavefunction_closed(z, x)
            rows.append(
                {
                    "kind": "wavefunction",
                    "x": x,
                    "re": series.real,
                    "im": series.imag,
                    "closed_re": closed.real,
                    "closed_im": closed.imag,
                    "abs_diff": abs(series - closed),
                }
            )
    else:
        gamma = config.gamma[0] if config.gamma else 0.0
        rows = _amplitude_rows(gk_states.gk_state(config.J[0], gamma, config.truncation).amplitudes)
    emit(config, rows, EVAL_COLUMNS)
    return EXIT_OK


def cmd_overlap(config: RunConfig) -> int:
    gammas = config.gamma or [0.0] * len(config.J)

    def closed(i: int, j: int) -> complex:
        if config.z:
            return bg_states.bg_overlap(config.z[i], config.z[j])
        return gk_states.gk_overlap(config.J[i], gammas[i], config.J[j], gammas[j])

    if config.z:
        states = [bg_states.bg_state(z, config.truncation) for z in config.z]
    else:
        states = [gk_states.gk_state(J, g, config.truncation) for J, g in zip(config.J, gammas)]
    rows = []
    for i in range(len(states)):
        for j in range(len(states)):
            value = closed(i, j)
            # bg_overlap gives <z_i|z_j>, gk_overlap gives <J_j,gamma_j|J_i,gamma_i>
            first, second = (i, j) if config.z else (j, i)
            direct = complex(np.vdot(states[first].amplitudes, states[second].amplitudes))
            rows.append(
                {
                    "i": i,
                    "j": j,
                    "re": value.real,
                    "im": value.imag,
                    "direct_re": direct.real,
                    "direct_im": direct.imag,
                    "abs_diff": abs(value - direct),
                }
            )
    emit(config, rows, OVERLAP_COLUMNS)
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "table": cmd_table, "eval": cmd_eval, "overlap": cmd_overlap}


def run(command: str, **options) -> None:
    """Validate options into a RunConfig, dispatch, and exit with the command's status."""
    ctx = click.get_current_context()
    try:
        for key in ("grid_j", "grid_x"):
            if options.get(key):
                options[key] = Grid.parse(options[key])
        options["z"] = [parse_complex(text) for text in options.get("z") or ()]
        config = RunConfig(command=command, **{key: value for key, value in options.items() if value is not None})
    except ValueError as e:
        click.echo(f"invalid options: {e}", err=True)
        ctx.exit(EXIT_USAGE)
    try:
        code = COMMANDS[command](config)
    except (DomainError, DimensionError) as e:
        click.echo(f"{type(e).__name__}: {e}", err=True)
        code = EXIT_USAGE
    except LoscError as e:
        logger.error(f"{command} failed: {type(e).__name__}: {e}")
        code = EXIT_FAILED
    except ValueError as e:
        click.echo(str(e), err=True)
        code = EXIT_USAGE
    ctx.exit(code)


def common_options(func):
    func = click.option(
        "--out", "output_path", type=click.Path(dir_okay=False), help="Write here instead of stdout."
    )(func)
    func = click.option(
        "--format", "output_format", type=click.Choice(["json", "csv"]), default=settings.FORMAT, show_default=True
    )(func)
    func = click.option("--tol", type=float, default=settings.TOL, show_default=True)(func)
    func = click.option("--truncation", type=int, default=settings.TRUNCATION, show_default=True)(func)
    return func


def state_options(func):
    func = click.option("--gamma", type=float, multiple=True, help="Angle for each --J.")(func)
    func = click.option("--J", "J", type=float, multiple=True, help="Action of a GK state, 0 <= J < 1/2.")(func)
    func = click.option("--z", "z", multiple=True, help="BG label RE[,IM] with |z| < 1/sqrt(2).")(func)
    return func


@click.group()
@click.version_option(settings.VERSION, prog_name="losc")
def losc():
    """Numerics and verification for the Legendre oscillator."""


@losc.command()
@common_options
@click.option("--only", multiple=True, type=click.Choice(SUITES), help="Run only these suites.")
def verify(**options):
    """Run the verification suites; exit 1 if any check fails."""
    run("verify", **options)


@losc.command()
@common_options
@click.option("--grid-j", help="Action grid START:STOP:COUNT.", default="0:0.45:10", show_default=True)
def table(**options):
    """Tabulate GK statistics over a grid of actions."""
    run("table", **options)


@losc.command(name="eval")
@common_options
@state_options
@click.option("--grid-x", help="Wavefunction grid START:STOP:COUNT.", default="-0.9:0.9:5", show_default=True)
def eval_state(**options):
    """Print the amplitudes of one state, and the BG wavefunction on a grid."""
    run("eval", **options)


@losc.command()
@common_options
@state_options
def overlap(**options):
    """Overlaps between every pair of the given states."""
    run("overlap", **options)


def main(argv: Optional[Sequence[str]] = None) -> None:
    losc.main(args=argv, prog_name="losc")


if __name__ == "__main__":
    main(sys.argv[1:])
