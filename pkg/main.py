"""Command-line front end for the fermionic non-Gaussianity toolkit."""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from graph.state import COMMANDS
from graph.workflow import EXIT_USAGE, exit_code, run_workflow
from utils.helpers import load_json_argument, setup_logging

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

_NOT_CONFIG = ("config", "log_level", "log_file")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for every command."""
    parser = argparse.ArgumentParser(
        description="Estimate, test and witness fermionic non-Gaussianity of small quantum states"
    )

    parser.add_argument("command", choices=COMMANDS, help="Command to run")

    state = parser.add_argument_group("state")
    state.add_argument("--state", type=str, help="Named state: cat, defect, ghz, plus, basis, haar, subset-phase, gaussian-random")
    state.add_argument("--n", type=int, help="Number of qubits (modes)")
    state.add_argument("--eps2", type=float, help="Cat weight eps^2 on |1^n>")
    state.add_argument("--q", type=int, help="Subset-phase support exponent (2^q states)")
    state.add_argument("--bits", type=str, help="Bit string for --state basis, qubit 0 first")
    state.add_argument("--state-json", type=str, help="EnsembleSpec as inline JSON or a file path")
    state.add_argument("--circuit", type=str, help="CircuitSpec as inline JSON or a file path, applied to the state")
    state.add_argument("--p", type=float, help="Global depolarizing strength applied last")

    estimation = parser.add_argument_group("estimation")
    estimation.add_argument("--shots", type=int, help="Shots (per layer for single-estimate)")
    estimation.add_argument("--epsilon", type=float, help="Tester distance parameter")
    estimation.add_argument("--delta", type=float, help="Failure probability (default: 0.05)")
    estimation.add_argument("--k", type=int, help="FAF order (default: 1)")
    estimation.add_argument("--seed", type=int, help="Random seed, required for stochastic commands")

    experiments = parser.add_argument_group("experiments")
    experiments.add_argument("--ps", type=float, nargs="+", help="Noise strength grid")
    experiments.add_argument("--thetas", type=float, nargs="+", help="R_zz angles for sweep-theta")
    experiments.add_argument("--noise", type=str, help="Channel kind: depolarizing, amplitude_damping, dephasing, bit_flip")
    experiments.add_argument("--noise-strength", type=float, help="Channel strength for brickwork noise")
    experiments.add_argument("--depth", type=int, help="Brickwork depth")
    experiments.add_argument("--instances", type=int, help="Random circuit instances")
    experiments.add_argument("--draws", type=int, help="Ensemble draws")

    output = parser.add_argument_group("output")
    output.add_argument("--output", "-o", type=str, help="Report path (default: $FERMIPROBE_OUTPUT_DIR/<command>.<format>)")
    output.add_argument("--format", choices=["csv", "json"], help="Report format (default: json)")
    output.add_argument("--records", action="store_true", default=None, help="Write raw Bell shots or layer shots next to the report")
    output.add_argument("--config", type=str, help="JSON file mirroring RunConfig; flags override it")
    output.add_argument(
        "--log-level",
        type=str,
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: INFO)"
    )
    output.add_argument("--log-file", type=str, help="Path to log file (optional)")

    return parser


def collect_config(args: argparse.Namespace) -> Dict[str, Any]:
    """
    Merge ``--config`` with the flags given on the command line.

    Raises:
        ValueError: If a JSON argument cannot be read or parsed
    """
    raw: Dict[str, Any] = {}
    if args.config:
        loaded = load_json_argument(args.config)
        if not isinstance(loaded, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
        raw.update(loaded)

    for key, value in vars(args).items():
        if key in _NOT_CONFIG or value is None:
            continue
        if key in ("state_json", "circuit"):
            value = load_json_argument(value)
        raw[key] = value
    return raw


def print_summary(final_state: Dict[str, Any]) -> None:
    config = final_state.get("config")
    if config is not None and config.command == "layers":
        for row in final_state.get("rows") or []:
            print(f"layer {row['layer']}: {row['pairs']}")
    if final_state.get("verdict") is not None:
        print("ACCEPT" if final_state["verdict"] else "REJECT")
    if final_state.get("report_path"):
        print(final_state["report_path"])
    for error in final_state.get("errors", []):
        print(f"error: {error.get('node', 'unknown')}: {error.get('error_message', '')}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point.

    Returns:
        0 on success, 1 on a REJECT verdict, 2 on a usage or spec error
    """
    args = build_parser().parse_args(argv)
    setup_logging(log_level=args.log_level, log_file=args.log_file)

    try:
        raw_config = collect_config(args)
    except ValueError as e:
        logger.error(f"Failed to read configuration: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    final_state = run_workflow(raw_config)
    print_summary(final_state)
    return exit_code(final_state)


if __name__ == "__main__":
    sys.exit(main())
