import argparse
import sys

from loguru import logger

from lib.config import read_config
from lib.data_schema import emit_csv
from lib.exceptions import NonlocalError
from lib.reproduction import run_convergence, run_reproduction, run_solve
from lib.solver import StepMode


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got '{text}'") from e


def parse_args(argv: list[str] | None = None) -> dict:  # noqa: D103
    parser = argparse.ArgumentParser(
        description="Solve u' + Au = 0 with the nonlocal condition u(0) + int_0^T w(s) u(s) ds = u0."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    solve = subparsers.add_parser("solve", help="Solve the problem described by a config file.")
    solve.add_argument("--config", type=str, required=True, help="The path of the key = value config file.")
    solve.add_argument("--out", type=str, required=False, default=None, help="CSV destination, overrides 'out'.")

    reproduce = subparsers.add_parser("reproduce", help="Reproduce one table entry of an example.")
    reproduce.add_argument("--example", type=int, required=True, choices=[1, 2], help="The example number.")
    reproduce.add_argument("--n", type=int, required=True, help="The Gauss order.")
    reproduce.add_argument("--N", type=int, required=True, help="The Sinc truncation.")
    reproduce.add_argument(
        "--step-mode", type=StepMode, required=False, default=StepMode.SCALED, choices=list(StepMode)
    )
    reproduce.add_argument("--out", type=str, required=False, default=None, help="CSV destination.")

    converge = subparsers.add_parser("converge", help="Error of example 1 over a list of N.")
    converge.add_argument("--example", type=int, required=False, default=1, choices=[1], help="The example number.")
    converge.add_argument("--n", type=int, required=True, help="The Gauss order.")
    converge.add_argument("--N-list", type=_int_list, required=True, help="Comma-separated Sinc truncations.")
    converge.add_argument(
        "--step-mode", type=StepMode, required=False, default=StepMode.SCALED, choices=list(StepMode)
    )
    converge.add_argument("--out", type=str, required=False, default=None, help="CSV destination.")

    args = parser.parse_args(argv)

    params = vars(args)
    logger.info("\n\t".join([f"{k}: {v}" for k, v in params.items()]))
    return params


def run(params: dict) -> None:
    """Dispatch one parsed command line."""
    command = params["command"]
    if command == "solve":
        config = read_config(params["config"])
        emit_csv(run_solve(config), params["out"] or config.out)
    elif command == "reproduce":
        emit_csv(run_reproduction(params["example"], params["n"], params["N"], params["step_mode"]), params["out"])
    else:
        df, _ = run_convergence(params["example"], params["n"], params["N_list"], params["step_mode"])
        emit_csv(df, params["out"])


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns 0, or 2/3/4 for config errors, existence refusals and numerical failures."""
    params = parse_args(argv)
    try:
        run(params)
    except NonlocalError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValueError as e:
        logger.error(f"Invalid run: {e}")
        return 2
    except OSError as e:
        logger.error(str(e))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
