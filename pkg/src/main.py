#!/usr/bin/env python3
"""Main entry point for the convex-stability command line."""

import logging
import os
import sys
from typing import List, Optional

import click

# Add the parent directory to Python path to make 'src' package available
# This needs to be before importing from src
current_dir = os.path.dirname(os.path.abspath(__file__))
parent_dir = os.path.dirname(current_dir)
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

from src.cli.commands import EXIT_ERROR, cli, error_payload  # noqa: E402
from src.errors import ConvergenceError  # noqa: E402


def main(argv: Optional[List[str]] = None) -> int:
    """Application main entry point.

    Args:
        argv: Command-line arguments without the program name; sys.argv by default

    Returns:
        Process exit code
    """
    try:
        result = cli.main(args=argv, prog_name="convex-stability", standalone_mode=False)
    except click.exceptions.Abort:
        logging.info("Command aborted by user")
        return EXIT_ERROR
    except click.ClickException as e:
        click.echo(error_payload(e), err=True)
        return EXIT_ERROR
    except (ValueError, ConvergenceError, OSError) as e:
        logging.error(f"Command failed: {e}")
        click.echo(error_payload(e), err=True)
        return EXIT_ERROR
    except Exception as e:
        logging.error(f"Fatal error: {e}", exc_info=True)
        click.echo(error_payload(e), err=True)
        return EXIT_ERROR
    return int(result or 0)


if __name__ == "__main__":
    raise SystemExit(main())
