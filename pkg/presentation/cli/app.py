"""
Command-line front end.

All angles are in radians. Flags left out fall back to the config file given
with --config, then to the KICKED_TOP_* environment variables, then to the
built-in defaults.
"""

import argparse
import logging
import sys
from typing import Any, Dict, Optional, Sequence

from config import COMMANDS, Settings, build_config, load_config_file, parse_kappas
from config.settings import FIELD_NAMES
from domain import CircuitLevel, KickedTopError, OutputFormat, SweepMode
from .commands import COMMAND_HANDLERS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

DESCRIPTIONS = {
    "classical-map": "Iterate the classical map (p = pi/2) from one point or a (theta, phi) lattice.",
    "compile": "Compile U^N of the two-qubit Floquet operator to a fixed-size netlist.",
    "kappa-sweep": "Time-averaged concurrence against kappa (or per kick with --per-kick).",
    "phase-grid": "Time-averaged concurrence over a lattice of initial coherent states.",
    "oscs": "O_SCS and concurrence after every kick for one initial coherent state.",
    "tomo-demo": "Evolve, measure nine Pauli bases, reconstruct and report the fidelity.",
    "fidelity": "Tomography fidelity against kick number under depolarizing noise.",
}


def _common_arguments() -> argparse.ArgumentParser:
    """Flags shared by every subcommand; unset flags are left out of the namespace."""
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON config file with \"version\": 1")
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="logging level (default: KICKED_TOP_LOG_LEVEL or INFO)")

    physics = common.add_argument_group("kicked top")
    physics.add_argument("--kappa", type=float, help="chaoticity kappa, dimensionless (default 2.5)")
    physics.add_argument("--kappas", type=parse_kappas,
                         help="kappa values as 'a,b,c' or 'start:stop:step' (default 0:12:0.5)")
    physics.add_argument("--p", type=float, help="rotation angle per kick in radians (default pi/2)")
    physics.add_argument("--theta", type=float, help="initial polar angle in radians, in [0, pi]")
    physics.add_argument("--phi", type=float, help="initial azimuth in radians")
    physics.add_argument("--grid-theta", type=int, help="lattice rows over [0, pi] (default 17)")
    physics.add_argument("--grid-phi", type=int, help="lattice columns over [0, 2 pi) (default 17)")
    physics.add_argument("--kicks", type=int, help="number of kicks N")

    execution = common.add_argument_group("execution")
    execution.add_argument("--mode", choices=[m.value for m in SweepMode],
                           help="exact statevector, shots (tomography) or noisy (default exact)")
    execution.add_argument("--shots", type=int, help="shots per tomography basis (default 8192)")
    execution.add_argument("--p1", type=float, help="depolarizing probability per single-qubit gate (default 0)")
    execution.add_argument("--p2", type=float, help="depolarizing probability per CNOT (default 0)")
    execution.add_argument("--seed", type=int, help="master seed (default KICKED_TOP_SEED or 0)")
    execution.add_argument("--jobs", type=int, help="worker threads (default KICKED_TOP_JOBS or 1)")
    execution.add_argument("--level", choices=[CircuitLevel.ROTATION.value, CircuitLevel.IBMQ.value],
                           help="gate set: rotation (CNOT+Rz/Ry/X) or ibmq (CNOT+U1/U3) (default rotation)")
    execution.add_argument("--oscs-resolution", type=int, nargs=2, metavar=("N_THETA", "N_PHI"),
                           help="coarse O_SCS scan before refinement (default 181 360)")

    output = common.add_argument_group("output")
    output.add_argument("--out", help="output directory (default: current directory)")
    output.add_argument("--format", choices=[f.value for f in OutputFormat], help="csv or json (default csv)")
    output.add_argument("--mkdirs", action=argparse.BooleanOptionalAction,
                        help="create a missing output directory instead of failing")
    output.add_argument("--stamp", action=argparse.BooleanOptionalAction,
                        help="record a creation timestamp in JSON output")
    return common


def create_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="kicked-top",
        description="Hybrid classical-quantum simulation of the quantum kicked top. "
                    "All angles are in radians; p defaults to pi/2 and tomography to 8192 shots per basis.",
    )
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True
    common = _common_arguments()
    for name in COMMANDS:
        sub = subparsers.add_parser(name, parents=[common], help=DESCRIPTIONS[name], description=DESCRIPTIONS[name])
        if name == "compile":
            sub.add_argument("--prune", action=argparse.BooleanOptionalAction, default=argparse.SUPPRESS,
                             help="drop identity rotations after verification (breaks the fixed gate count)")
            sub.add_argument("--verify-netlist", default=argparse.SUPPRESS, metavar="PATH",
                             help="re-read a netlist and verify it against U^N instead of compiling")
        if name == "kappa-sweep":
            sub.add_argument("--per-kick", action=argparse.BooleanOptionalAction, default=argparse.SUPPRESS,
                             help="write concurrence for every (kappa, kick) instead of the time average")
    return parser


def _cli_values(namespace: argparse.Namespace) -> Dict[str, Any]:
    return {key: value for key, value in vars(namespace).items() if key in FIELD_NAMES and key != "command"}


def run(argv: Optional[Sequence[str]] = None, settings: Optional[Settings] = None) -> int:
    """Parse arguments, resolve the configuration and run one command."""
    args = create_parser().parse_args(argv)
    if getattr(args, "log_level", None):
        logging.getLogger().setLevel(args.log_level)
    settings = settings or Settings.from_env()
    file_values = load_config_file(args.config) if getattr(args, "config", None) else {}
    config = build_config(args.command, _cli_values(args), file_values, settings)
    logger.info(f"Running {config.command}")
    written = COMMAND_HANDLERS[config.command](config)
    logger.info(f"{config.command} finished, {len(written)} file(s) written")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, settings: Optional[Settings] = None) -> int:
    """Entry point returning the process exit code.

    0 when every output was written and verified, 2 for invalid input or a
    failed verification, 1 for unexpected errors.
    """
    try:
        return run(argv, settings)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INVALID
    except KickedTopError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as e:
        logger.exception(f"Command failed: {str(e)}")
        return EXIT_FAILURE
