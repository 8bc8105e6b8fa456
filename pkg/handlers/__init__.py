# Command handlers for the amice-kit CLI

from handlers.base_handler import BaseCommandHandler
from handlers.cli import HANDLERS, build_parser, run
from handlers.error_handler import CommandErrorHandler

__all__ = [
    'BaseCommandHandler',
    'CommandErrorHandler',
    'HANDLERS',
    'build_parser',
    'run',
]
