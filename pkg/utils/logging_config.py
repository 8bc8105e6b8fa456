"""
Logging configuration with contextual and JSON formatters.

All handlers write to stderr: stdout carries the CLI's JSON result. Library
code attaches its context (``command``, ``operation``, ``elapsed_seconds``,
and the operation's own parameters) through ``extra``.
"""

import json
import logging
import logging.config
import sys
import time
from functools import wraps
from typing import Optional

from config.settings import settings

# LogRecord attributes that are not user-supplied extras
_RECORD_ATTRS = frozenset(vars(logging.LogRecord('', 0, '', 0, '', (), None))) | {'message', 'asctime'}


class ContextualFormatter(logging.Formatter):
    """Plain-text formatter that stamps the configured environment."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.environment = settings.ENVIRONMENT

    def format(self, record):
        record.environment = self.environment
        return super().format(record)


class JSONFormatter(logging.Formatter):
    """One JSON object per record: level, logger, message and any extras."""

    def __init__(self):
        super().__init__()
        self.environment = settings.ENVIRONMENT

    def format(self, record):
        entry = {
            'timestamp': self.formatTime(record, '%Y-%m-%dT%H:%M:%S'),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'environment': self.environment,
        }
        entry.update({key: value for key, value in vars(record).items()
                      if key not in _RECORD_ATTRS and key not in entry})

        if record.exc_info:
            entry['exception'] = {
                'type': record.exc_info[0].__name__,
                'message': str(record.exc_info[1]),
                'traceback': self.formatException(record.exc_info),
            }

        return json.dumps(entry, default=str, sort_keys=True)


def setup_logging(log_level: str = None, use_json: bool = None) -> None:
    """Configure the logging tree from settings, with optional overrides."""
    log_level = (log_level or settings.LOG_LEVEL).upper()
    if use_json is None:
        use_json = settings.LOG_JSON or settings.ENVIRONMENT == 'production'

    config = {
        'version': 1,
        'disable_existing_loggers': False,
        'formatters': {
            'standard': {
                '()': ContextualFormatter,
                'format': '%(asctime)s [%(environment)s] %(name)s %(levelname)s: %(message)s'
            },
            'json': {
                '()': JSONFormatter
            }
        },
        'handlers': {
            'console': {
                'class': 'logging.StreamHandler',
                'level': log_level,
                'formatter': 'json' if use_json else 'standard',
                'stream': sys.stderr
            }
        },
        'loggers': {
            name: {'level': log_level, 'handlers': ['console'], 'propagate': False}
            for name in ('algebra', 'handlers', 'models', 'config')
        },
        'root': {
            'level': log_level,
            'handlers': ['console']
        }
    }

    logging.config.dictConfig(config)


def log_execution_time(logger: Optional[logging.Logger] = None):
    """Decorator logging how long an operation took and whether it raised."""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            func_logger = logger or logging.getLogger(func.__module__)
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                func_logger.warning(
                    f"{func.__name__} raised {type(e).__name__}: {e}",
                    extra={'operation': func.__name__,
                           'elapsed_seconds': time.perf_counter() - start,
                           'success': False,
                           'error_type': type(e).__name__})
                raise
            func_logger.debug(
                f"{func.__name__} finished",
                extra={'operation': func.__name__,
                       'elapsed_seconds': time.perf_counter() - start,
                       'success': True})
            return result
        return wrapper
    return decorator


class ErrorContext:
    """Context manager logging an operation and its parameters; never swallows errors."""

    def __init__(self, logger: logging.Logger, operation: str, **context):
        self.logger = logger
        self.operation = operation
        self.context = context
        self.start = None

    def _extra(self, **fields):
        return {'operation': self.operation, **self.context, **fields}

    def __enter__(self):
        self.start = time.perf_counter()
        self.logger.debug(f"{self.operation} started", extra=self._extra())
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is None:
            self.logger.debug(f"{self.operation} finished",
                              extra=self._extra(elapsed_seconds=elapsed, success=True))
        else:
            self.logger.error(f"{self.operation} failed: {exc_val}",
                              extra=self._extra(elapsed_seconds=elapsed, success=False,
                                                error_type=exc_type.__name__))
        return False
