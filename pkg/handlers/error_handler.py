"""
Error handling for CLI commands.

Maps library exceptions to process exit codes and renders the JSON error body
written in place of a result.
"""

import logging
from typing import Any, Dict, Tuple

from pydantic import ValidationError

from utils.error_handling import DomainError, InvariantError, SchemaError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_SCHEMA = 2
EXIT_UNEXPECTED = 70


class CommandErrorHandler:
    """Centralized error handling for CLI commands."""

    def __init__(self, command_name: str):
        self.command_name = command_name
        self.logger = logging.getLogger(f"handlers.{command_name}")

    def exit_code_for(self, error: Exception) -> int:
        """Determine the exit code for an error type."""
        if isinstance(error, (DomainError, InvariantError)):
            return EXIT_DOMAIN
        if isinstance(error, (SchemaError, ValidationError, OSError)):
            return EXIT_SCHEMA
        return EXIT_UNEXPECTED

    def handle_error(self, error: Exception) -> Tuple[int, Dict[str, Any]]:
        """Log the error and build ``(exit_code, body)``."""
        code = self.exit_code_for(error)
        error_type = type(error).__name__
        body: Dict[str, Any] = {
            'error': getattr(error, 'message', None) or str(error),
            'error_type': error_type,
            'field': getattr(error, 'field', None),
        }
        if getattr(error, 'achievable_precision', None) is not None:
            body['achievable_precision'] = error.achievable_precision
        if getattr(error, 'index', None) is not None:
            body['index'] = error.index

        if code == EXIT_UNEXPECTED:
            self.logger.error(f"Unexpected error in {self.command_name}: {error}", exc_info=True)
        else:
            self.logger.warning(f"{self.command_name} failed with {error_type}: {body['error']}")
        return code, body
