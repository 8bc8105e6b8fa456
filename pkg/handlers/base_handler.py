"""
Base class for CLI command handlers.

A handler validates its JSON inputs, calls into ``algebra`` and returns a
JSON-ready dict. ``handle`` wraps ``execute`` with logging, timing and the
exit-code mapping of ``CommandErrorHandler``.
"""

import json
import logging
import time
from abc import ABC, abstractmethod
from argparse import Namespace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Type

from config.settings import settings
from handlers.error_handler import EXIT_OK, CommandErrorHandler
from models.schemas import SpecT, load_spec
from utils.error_handling import SchemaError


class BaseCommandHandler(ABC):
    """
    Base class for one CLI command.

    Subclasses set ``command_name`` and implement ``execute``.
    """

    command_name: str = ''

    def __init__(self):
        self.logger = logging.getLogger(f"handlers.{self.command_name}")
        self.error_handler = CommandErrorHandler(self.command_name)

    @abstractmethod
    def execute(self, args: Namespace) -> Dict[str, Any]:
        """Run the command and return its JSON-ready result."""
        pass

    def handle(self, args: Namespace) -> Tuple[int, Dict[str, Any]]:
        """Execute with logging; returns ``(exit_code, payload)``."""
        start = time.perf_counter()
        self.logger.info(f"Starting {self.command_name}", extra={'command': self.command_name})
        try:
            payload = self.execute(args)
        except Exception as error:
            return self.error_handler.handle_error(error)
        elapsed = time.perf_counter() - start
        self.logger.info(f"{self.command_name} completed in {elapsed:.3f}s",
                         extra={'command': self.command_name, 'elapsed_seconds': elapsed})
        return EXIT_OK, payload

    # helpers shared by the commands

    def read_json(self, path: str, option: str) -> Dict[str, Any]:
        """Load a JSON object; unreadable or malformed files are schema errors."""
        try:
            data = json.loads(Path(path).read_text())
        except OSError as e:
            raise SchemaError(f"cannot read {option} file '{path}': {e.strerror}", field=option)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{option} file '{path}' is not JSON: {e.msg} at line {e.lineno}",
                              field=option)
        if not isinstance(data, dict):
            raise SchemaError(f"{option} file '{path}' must hold a JSON object", field=option)
        return data

    def load(self, spec_cls: Type[SpecT], path: str, option: str) -> SpecT:
        try:
            return load_spec(spec_cls, self.read_json(path, option))
        except SchemaError as e:
            if e.field == option:
                raise
            raise SchemaError(f"{option}: {e.message}", field=f"{option}.{e.field}")

    def check_order(self, order: Optional[int], option: str = 'order') -> Optional[int]:
        """Reject orders above the configured cap."""
        if order is None:
            return None
        if order < 0:
            raise SchemaError(f"{option} must be nonnegative, got {order}", field=option)
        if order > settings.MAX_ORDER:
            raise SchemaError(f"{option} {order} exceeds AMICE_KIT_MAX_ORDER={settings.MAX_ORDER}",
                              field=option)
        return order
