from .suite import (
    EXIT_OK,
    EXIT_PARTIAL,
    EXIT_USAGE,
    EXIT_FAILED,
    RunContext,
    start_run,
    run_mfdfa_suite,
    run_ldiagram_suite,
    surrogate_seeds,
)
from .commands import COMMANDS, build_parser, mfdfa_config

__all__ = [
    "EXIT_OK",
    "EXIT_PARTIAL",
    "EXIT_USAGE",
    "EXIT_FAILED",
    "RunContext",
    "start_run",
    "run_mfdfa_suite",
    "run_ldiagram_suite",
    "surrogate_seeds",
    "COMMANDS",
    "build_parser",
    "mfdfa_config",
]
