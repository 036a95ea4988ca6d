"""PolarZF CLI interface."""

from __future__ import annotations

import logging

import typer as t

from polarzf import paths, telemetry
from polarzf.cli import richstate
from polarzf.commands import (
    design as design_,
    props as props_,
    sweep as sweep_,
    utils,
    verify as verify_,
)


logger = telemetry.get_logger(__name__)

cli = t.Typer(
    name="polarzf",
    help=(
        "Zero-forcing designs for polarimetric line-of-sight interference channels.\n\n"
        "Exit codes: 0 success, 2 invalid input, 3 infeasible nulling, "
        "4 certificate violation."
    ),
    no_args_is_help=True,
)

SCENARIO_HELP = "Path to the scenario file."
DESIGN_HELP = "Path to a design file written by `design`."
OUT_HELP = "Output file. Written to stdout if omitted."
SEED_HELP = "Override the placement seed of the scenario file."
METHOD_HELP = "Beamformer construction: `nullspace` or `closed-form`."
TRIALS_HELP = "Number of random placements."
K_HELP = "Number of user pairs."
SNR_LO_HELP = "Lower SNR (linear)."
SNR_HI_HELP = "Upper SNR (linear)."
VERBOSE_HELP = "Enable verbose output. (`DEBUG` level)"
QUIET_HELP = "Only report errors."

SCENARIO_CMDS = "-s", "--scenario"
DESIGN_CMDS = "-d", "--design"
OUT_CMDS = "-o", "--out"
SEED_CMDS = ("--seed",)
METHOD_CMDS = "-m", "--method"
TRIALS_CMDS = "-n", "--trials"
K_CMDS = "-k", "--k"
SNR_LO_CMDS = ("--snr-lo",)
SNR_HI_CMDS = ("--snr-hi",)
VERBOSE_CMDS = "-v", "--verbose"
QUIET_CMDS = "-q", "--quiet"

DEFAULT_SCENARIO = str(paths.DEFAULT_SCENARIO)


def verbose(ctx: t.Context, _param: t.CallbackParam, value: bool):
    state = ctx.ensure_object(richstate.RichState)
    if value:
        state.stream.setLevel(logging.DEBUG)


def quiet(ctx: t.Context, _param: t.CallbackParam, value: bool):
    state = ctx.ensure_object(richstate.RichState)
    if value:
        state.stream.setLevel(logging.ERROR)


@cli.command()
@utils.handle_exceptions
def design(
    scenario: str = t.Option(DEFAULT_SCENARIO, *SCENARIO_CMDS, help=SCENARIO_HELP),
    out: str = t.Option(None, *OUT_CMDS, help=OUT_HELP, show_default=False),
    seed: int = t.Option(None, *SEED_CMDS, help=SEED_HELP, show_default=False),
    method: str = t.Option("nullspace", *METHOD_CMDS, help=METHOD_HELP),
    _verbose: bool = t.Option(False, *VERBOSE_CMDS, help=VERBOSE_HELP, callback=verbose),
    _quiet: bool = t.Option(False, *QUIET_CMDS, help=QUIET_HELP, callback=quiet),
):
    """Design precoders and combiners for a scenario and emit them with their leakage."""
    if method not in ("nullspace", "closed-form"):
        raise utils.fail(f"unknown method {method!r}", utils.INVALID_INPUT_EXIT)
    design_.design(
        scenario_path=scenario,
        out=out,
        seed=seed,
        method=method,  # type: ignore[arg-type]
    )


@cli.command()
@utils.handle_exceptions
def verify(
    design: str = t.Option(paths.DEFAULT_DESIGN_FILE, *DESIGN_CMDS, help=DESIGN_HELP),
    _verbose: bool = t.Option(False, *VERBOSE_CMDS, help=VERBOSE_HELP, callback=verbose),
    _quiet: bool = t.Option(False, *QUIET_CMDS, help=QUIET_HELP, callback=quiet),
):
    """Re-check the leakage and orthonormality certificates of a design file."""
    report = verify_.verify(design_path=design)
    t.echo(report.summary())


@cli.command()
@utils.handle_exceptions
def sweep(
    scenario: str = t.Option(DEFAULT_SCENARIO, *SCENARIO_CMDS, help=SCENARIO_HELP),
    out: str = t.Option(None, *OUT_CMDS, help=OUT_HELP, show_default=False),
    seed: int = t.Option(None, *SEED_CMDS, help=SEED_HELP, show_default=False),
    snr_lo: float = t.Option(None, *SNR_LO_CMDS, help=SNR_LO_HELP, show_default=False),
    snr_hi: float = t.Option(None, *SNR_HI_CMDS, help=SNR_HI_HELP, show_default=False),
    _verbose: bool = t.Option(False, *VERBOSE_CMDS, help=VERBOSE_HELP, callback=verbose),
    _quiet: bool = t.Option(False, *QUIET_CMDS, help=QUIET_HELP, callback=quiet),
):
    """Emit the sum-rate curve of a scenario's design as CSV."""
    sweep_.sweep(scenario_path=scenario, out=out, seed=seed, snr_lo=snr_lo, snr_hi=snr_hi)


@cli.command()
@utils.handle_exceptions
def fig5(
    trials: int = t.Option(20, *TRIALS_CMDS, help=TRIALS_HELP, min=1),
    out: str = t.Option(None, *OUT_CMDS, help=OUT_HELP, show_default=False),
    seed: int = t.Option(0, *SEED_CMDS, help="Seed of the first placement."),
    k: int = t.Option(5, *K_CMDS, help=K_HELP, min=1),
    _verbose: bool = t.Option(False, *VERBOSE_CMDS, help=VERBOSE_HELP, callback=verbose),
    _quiet: bool = t.Option(False, *QUIET_CMDS, help=QUIET_HELP, callback=quiet),
):
    """Emit the mean DOF for nested dipole sets (2 to 6 dipoles) as CSV."""
    sweep_.fig5(trials=trials, out=out, seed=seed, k=k)


@cli.command()
@utils.handle_exceptions
def props(
    k: int = t.Option(3, *K_CMDS, help=K_HELP, min=1),
    out: str = t.Option(None, *OUT_CMDS, help=OUT_HELP, show_default=False),
    seed: int = t.Option(0, *SEED_CMDS, help="Placement seed."),
    trials: int = t.Option(100, *TRIALS_CMDS, help=TRIALS_HELP, min=1),
    snr_lo: float = t.Option(None, *SNR_LO_CMDS, help=SNR_LO_HELP, show_default=False),
    snr_hi: float = t.Option(None, *SNR_HI_CMDS, help=SNR_HI_HELP, show_default=False),
    _verbose: bool = t.Option(False, *VERBOSE_CMDS, help=VERBOSE_HELP, callback=verbose),
    _quiet: bool = t.Option(False, *QUIET_CMDS, help=QUIET_HELP, callback=quiet),
):
    """Run the acceptance checks for K users and report gamma-hat and DOF.

    The result rows are written as CSV when `--out` is given.
    """
    if (snr_lo is None) != (snr_hi is None):
        raise utils.fail("--snr-lo and --snr-hi go together", utils.INVALID_INPUT_EXIT)
    pair = (snr_lo, snr_hi) if snr_lo is not None else None
    try:
        report = props_.props(k=k, out=out, seed=seed, trials=trials, snr_pair=pair)
    except props_.ChecksFailedError as e:
        for check in e.report.checks:
            t.echo(check.line())
        raise
    for check in report.checks:
        t.echo(check.line())


if __name__ == "__main__":
    cli(["props", "--k", "3"])
