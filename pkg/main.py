"""
Main entry point for amice-kit.
"""

import logging
import sys
from typing import List, Optional

from config.settings import settings
from handlers.cli import run
from utils.logging_config import setup_logging


def main(argv: Optional[List[str]] = None) -> int:
    """Configure logging, then dispatch to the CLI."""
    setup_logging()
    logger = logging.getLogger(__name__)
    logger.debug(f"Environment: {settings.ENVIRONMENT}")

    validation = settings.validate_config()
    for issue in validation['issues']:
        logger.warning(f"Configuration issue: {issue}")

    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
