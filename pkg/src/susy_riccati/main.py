#!/usr/bin/env python3

import sys
from typing import List, Optional

from pydantic import ValidationError

from .cli.commands import build_parser, config_from_args, execute
from .exceptions import ConfigurationError, exit_code_for
from .utils.logging import get_logger, setup_logging

logger = get_logger(__name__)


def main(argv: Optional[List[str]] = None) -> int:
    """Parse flags, run one subcommand and return its exit code.

    Exit codes: 0 all checks passed, 1 a check failed, 2 configuration error,
    3 numerical failure.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = config_from_args(args)
    except (ConfigurationError, ValidationError) as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 2

    setup_logging(config.settings.log_level, config.settings.log_structured)

    try:
        return execute(config)
    except Exception as e:
        code = exit_code_for(e)
        logger.error(
            "Run failed",
            subcommand=config.subcommand,
            error=str(e),
            error_type=type(e).__name__,
            exit_code=code,
        )
        print(f"Error: {e}", file=sys.stderr)
        return code


def cli_main() -> None:
    """CLI entry point."""
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    cli_main()
