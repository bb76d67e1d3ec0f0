"""
Unit tests for logging configuration.

Tests the logging setup, run ID tracking, and log file creation.
"""

import logging
import logging.handlers
import re
import tempfile
from pathlib import Path

import pytest

from ltlf_datagen.config.logging_config import (
    setup_logging,
    get_logger,
    set_run_id,
    get_run_id,
    clear_run_id,
    RunIdFilter,
)


@pytest.fixture(autouse=True)
def reset_root_logger():
    """Close the file handlers a test opened."""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        handler.close()
    root.handlers.clear()


class TestLoggingSetup:
    """Tests for logging system initialization."""

    def test_setup_logging_creates_log_directory(self):
        """Test that setup_logging creates the log directory."""
        with tempfile.TemporaryDirectory() as tmpdir:
            log_dir = Path(tmpdir) / 'logs'
            setup_logging(app_name='test_app', log_dir=str(log_dir),
                          enable_console=False, enable_file=True)

            assert log_dir.exists()
            assert log_dir.is_dir()

    def test_setup_logging_creates_log_files(self):
        """Test that setup_logging creates the application and error logs."""
        with tempfile.TemporaryDirectory() as tmpdir:
            log_dir = Path(tmpdir) / 'logs'
            setup_logging(app_name='test_app', log_dir=str(log_dir),
                          enable_console=False, enable_file=True)

            logger = get_logger(__name__)
            logger.info('Test message')
            logger.error('Test error')

            assert (log_dir / 'test_app.log').exists()
            assert (log_dir / 'test_app_error.log').exists()

    def test_setup_logging_development_mode(self, monkeypatch):
        """Test that development mode sets DEBUG level."""
        monkeypatch.delenv('LOG_LEVEL', raising=False)
        monkeypatch.setenv('LTLF_DATAGEN_ENV', 'development')
        setup_logging(app_name='test_app', enable_console=False)

        assert logging.getLogger().level == logging.DEBUG

    def test_setup_logging_production_mode(self, monkeypatch):
        """Test that production mode sets INFO level."""
        monkeypatch.delenv('LOG_LEVEL', raising=False)
        monkeypatch.setenv('LTLF_DATAGEN_ENV', 'production')
        setup_logging(app_name='test_app', enable_console=False)

        assert logging.getLogger().level == logging.INFO

    def test_explicit_level_wins_over_environment(self, monkeypatch):
        """Test that an explicit log level overrides LOG_LEVEL."""
        monkeypatch.setenv('LOG_LEVEL', 'ERROR')
        setup_logging(app_name='test_app', log_level='WARNING', enable_console=False)

        assert logging.getLogger().level == logging.WARNING

    def test_no_file_handlers_without_file_logging(self):
        """Test that file logging is off unless requested."""
        setup_logging(app_name='test_app', enable_console=True)

        root_logger = logging.getLogger()
        assert not any(isinstance(h, logging.FileHandler) for h in root_logger.handlers)

    def test_get_logger_returns_logger(self):
        """Test that get_logger returns a logger instance."""
        logger = get_logger('test_module')
        assert isinstance(logger, logging.Logger)
        assert logger.name == 'test_module'


class TestRunIdTracking:
    """Tests for run ID tracking functionality."""

    def test_set_run_id_generates_id(self):
        """Test that set_run_id generates a run ID."""
        run_id = set_run_id()
        assert run_id is not None
        assert len(run_id) > 0
        clear_run_id()

    def test_set_run_id_with_custom_id(self):
        """Test that set_run_id accepts a custom ID."""
        assert set_run_id('custom-run-id-123') == 'custom-run-id-123'
        clear_run_id()

    def test_get_run_id_returns_set_id(self):
        """Test that get_run_id returns the set run ID."""
        set_run_id('test-run-id')
        assert get_run_id() == 'test-run-id'
        clear_run_id()

    def test_clear_run_id_removes_id(self):
        """Test that clear_run_id removes the run ID."""
        set_run_id('test-id')
        clear_run_id()
        assert get_run_id() is None

    def test_run_id_filter_adds_id_to_record(self):
        """Test that RunIdFilter adds run_id to log records."""
        set_run_id('test-run-123')
        record = logging.getLogger('test').makeRecord(
            'test', logging.INFO, '', 1, 'Test message', None, None)

        RunIdFilter().filter(record)

        assert record.run_id == 'test-run-123'
        clear_run_id()

    def test_run_id_filter_handles_no_id(self):
        """Test that RunIdFilter handles a missing run ID."""
        clear_run_id()
        record = logging.getLogger('test').makeRecord(
            'test', logging.INFO, '', 1, 'Test message', None, None)

        RunIdFilter().filter(record)

        assert record.run_id == 'N/A'


class TestLogFiles:
    """Tests for log file content and rotation."""

    def test_error_logs_written_to_error_file(self):
        """Test that ERROR logs are written to the error log file."""
        with tempfile.TemporaryDirectory() as tmpdir:
            log_dir = Path(tmpdir) / 'logs'
            setup_logging(app_name='test_app', log_dir=str(log_dir),
                          enable_console=False, enable_file=True)

            get_logger('test_error').error('This is an error message')

            content = (log_dir / 'test_app_error.log').read_text()
            assert 'This is an error message' in content
            assert 'ERROR' in content

    def test_info_logs_not_in_error_file(self):
        """Test that INFO logs are not written to the error log file."""
        with tempfile.TemporaryDirectory() as tmpdir:
            log_dir = Path(tmpdir) / 'logs'
            setup_logging(app_name='test_app', log_dir=str(log_dir),
                          enable_console=False, enable_file=True)

            get_logger('test_info').info('This is an info message')

            error_log = log_dir / 'test_app_error.log'
            if error_log.exists():
                assert 'This is an info message' not in error_log.read_text()

    def test_log_rotation_configuration(self):
        """Test that both file handlers rotate at 10 MB with 5 backups."""
        with tempfile.TemporaryDirectory() as tmpdir:
            setup_logging(app_name='test_app', log_dir=tmpdir,
                          enable_console=False, enable_file=True)

            rotating = [h for h in logging.getLogger().handlers
                        if isinstance(h, logging.handlers.RotatingFileHandler)]
            assert len(rotating) == 2
            for handler in rotating:
                assert handler.maxBytes == 10 * 1024 * 1024
                assert handler.backupCount == 5

    def test_log_format_includes_timestamp_module_and_run_id(self):
        """Test that file log lines carry timestamp, module name and run ID."""
        with tempfile.TemporaryDirectory() as tmpdir:
            log_dir = Path(tmpdir) / 'logs'
            setup_logging(app_name='test_app', log_dir=str(log_dir),
                          enable_console=False, enable_file=True)
            set_run_id('abc123')
            get_logger('test_format').info('Formatted message')
            clear_run_id()

            content = (log_dir / 'test_app.log').read_text()
            assert re.search(r'\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2}', content)
            assert 'test_format' in content
            assert 'RunID: abc123' in content


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
