"""
Main entry point for the kicked-top simulation toolkit.
"""

import logging
import sys
from typing import List

from dotenv import load_dotenv

from config import Settings
from domain import ConfigurationError
from presentation.cli import main as cli_main

logger = logging.getLogger(__name__)


def configure_logging(settings: Settings) -> None:
    """Root logging setup: stream handler plus an optional log file."""
    handlers: List[logging.Handler] = [logging.StreamHandler()]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=settings.log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
    )


def main() -> int:
    """Application entry point."""
    # Load environment variables from .env file if present
    load_dotenv()
    try:
        settings = Settings.from_env()
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    configure_logging(settings)
    return cli_main(sys.argv[1:], settings)


if __name__ == '__main__':
    sys.exit(main())
