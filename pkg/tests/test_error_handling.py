"""
Tests for the error hierarchy, command error mapping and logging helpers.
"""

import json
import logging
import sys
from argparse import Namespace

import pytest
from pydantic import BaseModel, ValidationError

from config.settings import settings
from handlers.base_handler import BaseCommandHandler
from handlers.error_handler import (
    EXIT_DOMAIN, EXIT_OK, EXIT_SCHEMA, EXIT_UNEXPECTED,
    CommandErrorHandler,
)
from utils.error_handling import (
    AmiceKitError, CertificateError, DomainError, ErrorSeverity,
    InsufficientDataError, InvariantError, PrecisionError,
    PreconditionError, SchemaError, ValidationResult,
)
from utils.logging_config import ErrorContext, JSONFormatter, log_execution_time


class _OrderInput(BaseModel):
    order: int


class TestValidationResult:
    """Test ValidationResult bookkeeping."""

    def test_starts_valid(self):
        """Test a fresh result."""
        result = ValidationResult(is_valid=True)

        assert result.errors == []
        assert result.warnings == []
        assert result.severity == ErrorSeverity.LOW

    def test_add_error_raises_severity(self):
        """Test that errors invalidate the result and only raise severity."""
        result = ValidationResult(is_valid=True)

        result.add_error("row 2 not dominated", ErrorSeverity.MEDIUM)
        assert result.is_valid is False
        assert result.severity == ErrorSeverity.MEDIUM

        result.add_error("negative entry")
        assert result.severity == ErrorSeverity.HIGH

        result.add_error("minor", ErrorSeverity.LOW)
        assert result.severity == ErrorSeverity.HIGH
        assert len(result.errors) == 3


class TestErrorHierarchy:
    """Test the library exception classes."""

    @pytest.mark.parametrize("error_class", [
        PreconditionError, InsufficientDataError, CertificateError, PrecisionError,
    ])
    def test_domain_subclasses(self, error_class):
        """Test that refined domain errors are domain errors."""
        assert issubclass(error_class, DomainError)
        assert issubclass(error_class, AmiceKitError)

    def test_field_is_kept(self):
        """Test that the offending field is carried."""
        error = SchemaError("count must be positive", field='matrix.count')

        assert error.message == "count must be positive"
        assert error.field == 'matrix.count'
        assert str(error) == "count must be positive"

    def test_precision_error_details(self):
        """Test the extra fields of PrecisionError."""
        error = PrecisionError("needs more digits", achievable_precision=3, index=7)

        assert error.achievable_precision == 3
        assert error.index == 7
        assert error.field is None


class TestCommandErrorHandler:
    """Test CommandErrorHandler exit codes and bodies."""

    @pytest.fixture
    def handler(self):
        return CommandErrorHandler('test')

    @pytest.mark.parametrize("error,expected", [
        (DomainError("x"), EXIT_DOMAIN),
        (CertificateError("x"), EXIT_DOMAIN),
        (InvariantError("x"), EXIT_DOMAIN),
        (SchemaError("x"), EXIT_SCHEMA),
        (FileNotFoundError("missing.json"), EXIT_SCHEMA),
        (RuntimeError("crashed"), EXIT_UNEXPECTED),
        (KeyError("k"), EXIT_UNEXPECTED),
    ])
    def test_exit_codes(self, handler, error, expected):
        """Test the exit code for each error family."""
        assert handler.exit_code_for(error) == expected

    def test_pydantic_validation_error(self, handler):
        """Test that schema validation failures map to the schema code."""
        with pytest.raises(ValidationError) as exc_info:
            _OrderInput(order='many')

        assert handler.exit_code_for(exc_info.value) == EXIT_SCHEMA

    def test_body(self, handler):
        """Test the JSON error body."""
        code, body = handler.handle_error(CertificateError("tail too weak", field='tail'))

        assert code == EXIT_DOMAIN
        assert body == {
            'error': "tail too weak",
            'error_type': 'CertificateError',
            'field': 'tail',
        }

    def test_body_with_precision(self, handler):
        """Test that precision details are reported."""
        _, body = handler.handle_error(PrecisionError("short", achievable_precision=1, index=4))

        assert body['achievable_precision'] == 1
        assert body['index'] == 4

    def test_plain_exception_body(self, handler):
        """Test a body for an exception without a field."""
        code, body = handler.handle_error(ValueError("bad"))

        assert code == EXIT_UNEXPECTED
        assert body['error'] == "bad"
        assert body['field'] is None


class _RecordingHandler(BaseCommandHandler):
    command_name = 'recording'

    def __init__(self, outcome):
        super().__init__()
        self.outcome = outcome

    def execute(self, args):
        if isinstance(self.outcome, Exception):
            raise self.outcome
        return {'value': self.outcome, 'args': args.order}


class TestBaseCommandHandler:
    """Test BaseCommandHandler.handle exit codes and logging."""

    def test_success(self):
        """Test that a result is paired with EXIT_OK."""
        code, body = _RecordingHandler(3).handle(Namespace(order=5))

        assert code == EXIT_OK
        assert body == {'value': 3, 'args': 5}

    def test_domain_failure(self):
        """Test that library errors become exit code 1."""
        handler = _RecordingHandler(PreconditionError("not dominated", field='matrix'))

        code, body = handler.handle(Namespace(order=5))

        assert code == EXIT_DOMAIN
        assert body['error_type'] == 'PreconditionError'
        assert body['field'] == 'matrix'

    def test_unexpected_failure(self):
        """Test that unexpected errors become exit code 70."""
        code, body = _RecordingHandler(RuntimeError("crashed")).handle(Namespace(order=5))

        assert code == EXIT_UNEXPECTED
        assert body['error'] == "crashed"

    def test_completion_is_logged_with_context(self, mocker):
        """Test that completion carries the command and elapsed time."""
        handler = _RecordingHandler(1)
        info = mocker.patch.object(handler.logger, 'info')

        handler.handle(Namespace(order=2))

        extra = info.call_args.kwargs['extra']
        assert extra['command'] == 'recording'
        assert extra['elapsed_seconds'] >= 0


class TestJSONFormatter:
    """Test JSONFormatter output."""

    def test_format(self):
        """Test the fields of a JSON log entry."""
        record = logging.LogRecord(
            name='algebra.series', level=logging.INFO, pathname='series.py',
            lineno=12, msg="composed %d terms", args=(5,), exc_info=None,
        )
        record.operation = 'compose'
        record.order = 8

        entry = json.loads(JSONFormatter().format(record))

        assert entry['level'] == 'INFO'
        assert entry['logger'] == 'algebra.series'
        assert entry['message'] == "composed 5 terms"
        assert entry['environment'] == settings.ENVIRONMENT
        assert entry['operation'] == 'compose'
        assert entry['order'] == 8

    def test_record_internals_are_omitted(self):
        """Test that only the entry fields and extras are written."""
        record = logging.LogRecord(
            name='handlers.cli', level=logging.DEBUG, pathname='cli.py',
            lineno=3, msg="parsed", args=(), exc_info=None,
        )

        entry = json.loads(JSONFormatter().format(record))

        assert set(entry) == {'timestamp', 'level', 'logger', 'message', 'environment'}

    def test_format_exception(self):
        """Test that exception details are included."""
        try:
            raise DomainError("wrong carrier")
        except DomainError:
            exc_info = sys.exc_info()

        record = logging.LogRecord(
            name='handlers.cli', level=logging.ERROR, pathname='cli.py',
            lineno=1, msg="failed", args=(), exc_info=exc_info,
        )
        entry = json.loads(JSONFormatter().format(record))

        assert entry['exception']['type'] == 'DomainError'
        assert entry['exception']['message'] == "wrong carrier"
        assert 'wrong carrier' in entry['exception']['traceback']


class TestLoggingHelpers:
    """Test log_execution_time and ErrorContext."""

    def test_log_execution_time_success(self, mocker):
        """Test that success is logged at debug level."""
        logger = mocker.Mock()

        @log_execution_time(logger)
        def add(a, b):
            return a + b

        assert add(2, 3) == 5
        logger.debug.assert_called_once()
        assert logger.debug.call_args.kwargs['extra']['success'] is True

    def test_log_execution_time_failure(self, mocker):
        """Test that failures are logged and re-raised."""
        logger = mocker.Mock()

        @log_execution_time(logger)
        def fail():
            raise InvariantError("mismatch")

        with pytest.raises(InvariantError):
            fail()

        extra = logger.warning.call_args.kwargs['extra']
        assert extra['success'] is False
        assert extra['error_type'] == 'InvariantError'

    def test_error_context_success(self, mocker):
        """Test that a clean block logs start and completion."""
        logger = mocker.Mock()

        with ErrorContext(logger, 'tensor_square', order=4):
            pass

        assert logger.debug.call_count == 2
        logger.error.assert_not_called()

    def test_error_context_propagates(self, mocker):
        """Test that errors are logged and not suppressed."""
        logger = mocker.Mock()

        with pytest.raises(CertificateError):
            with ErrorContext(logger, 'pairing', order=4):
                raise CertificateError("no tail")

        extra = logger.error.call_args.kwargs['extra']
        assert extra['operation'] == 'pairing'
        assert extra['order'] == 4
        assert extra['error_type'] == 'CertificateError'
