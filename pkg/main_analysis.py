#!/usr/bin/env python3
"""
Command-line entry point for mfscan.
Runs one subcommand (preprocess, mfdfa, surrogate, ldiagram, boxdim, synth, fitpdf, suite)
and exits with 0 (ok), 1 (some inputs failed), 2 (bad usage) or 3 (every input failed).
"""

import argparse
import os
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

# Add src to path
sys.path.append(os.path.join(os.path.dirname(__file__), 'src'))

from src.configs.config import get_settings
from src.data_models.errors import InputError
from src.pipeline.commands import COMMANDS, build_parser
from src.pipeline.suite import EXIT_FAILED, EXIT_USAGE
from src.utils.app_logging import enable_console_logging, get_context_logger, setup_logger

# Load environment variables
load_dotenv()

logger = setup_logger()
enable_console_logging()  # Always show logs in terminal for CLI


def main(argv: Optional[List[str]] = None) -> int:
    ctx_logger = get_context_logger("cli")
    try:
        settings = get_settings()
    except RuntimeError as e:
        ctx_logger.error(f"configuration error: {e}")
        return EXIT_USAGE

    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for bad flags
        return int(e.code or 0)

    handler = COMMANDS[args.command]
    try:
        return handler(args, settings)
    except (argparse.ArgumentTypeError, ValidationError, InputError) as e:
        ctx_logger.error(f"{args.command}: invalid arguments: {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        ctx_logger.warning("interrupted")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
