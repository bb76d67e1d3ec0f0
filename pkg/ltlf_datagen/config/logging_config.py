"""
Logging configuration module for ltlf-datagen.

Provides structured logging with:
- Environment-based log levels (DEBUG for development, INFO otherwise)
- Optional log files (application and errors) with rotation
- Run ID tracking so every line of one generation run can be correlated
- Proper formatting with timestamps, module names, and log levels
"""

import logging
import logging.handlers
import os
import sys
import uuid
from pathlib import Path
from typing import Optional, Union
from contextvars import ContextVar

# Context variable for run ID tracking
run_id_var: ContextVar[Optional[str]] = ContextVar('run_id', default=None)


class RunIdFilter(logging.Filter):
    """
    Logging filter that adds the current run ID to log records.

    Uses context variables so worker threads started from a run keep its ID.
    """

    def filter(self, record):
        """Add run_id to the log record."""
        record.run_id = run_id_var.get() or 'N/A'
        return True


class ColoredFormatter(logging.Formatter):
    """
    Colored console formatter for better readability on a terminal.

    Uses ANSI color codes to highlight different log levels.
    """

    # ANSI color codes
    COLORS = {
        'DEBUG': '\033[36m',      # Cyan
        'INFO': '\033[32m',       # Green
        'WARNING': '\033[33m',    # Yellow
        'ERROR': '\033[31m',      # Red
        'CRITICAL': '\033[35m',   # Magenta
    }
    RESET = '\033[0m'

    def format(self, record):
        """Format log record with colors for console output."""
        log_color = self.COLORS.get(record.levelname, self.RESET)
        record.levelname_colored = f"{log_color}{record.levelname}{self.RESET}"
        return super().format(record)


def setup_logging(
    app_name: str = 'ltlf_datagen',
    log_dir: Optional[Union[str, Path]] = None,
    log_level: Optional[str] = None,
    enable_console: bool = True,
    enable_file: bool = False
) -> logging.Logger:
    """
    Set up logging for the library and the command line.

    Args:
        app_name: Name used for the log file names
        log_dir: Directory to store log files (defaults to LOG_DIR or ./logs)
        log_level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL).
                  If None, uses LOG_LEVEL, else DEBUG when
                  LTLF_DATAGEN_ENV=development, else INFO
        enable_console: Whether to log to stderr
        enable_file: Whether to write rotating log files

    Returns:
        logging.Logger: Configured root logger

    Example:
        >>> logger = setup_logging('ltlf_datagen', enable_file=False)
        >>> logger.info('Generation started')
    """
    if log_level is None:
        log_level = os.environ.get('LOG_LEVEL')
    if log_level is None:
        env = os.environ.get('LTLF_DATAGEN_ENV', 'production').lower()
        log_level = 'DEBUG' if env == 'development' else 'INFO'

    log_level_value = getattr(logging, log_level.upper(), logging.INFO)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level_value)

    # Remove existing handlers to avoid duplicates
    root_logger.handlers.clear()

    detailed_format = (
        '%(asctime)s - %(name)s - %(levelname)s - '
        '[%(filename)s:%(lineno)d] - [RunID: %(run_id)s] - '
        '%(message)s'
    )
    console_format = (
        '%(asctime)s - %(name)s - %(levelname_colored)s - '
        '[RunID: %(run_id)s] - %(message)s'
    )
    date_format = '%Y-%m-%d %H:%M:%S'

    # Reports are printed on stdout, so the console handler uses stderr
    if enable_console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(log_level_value)
        console_handler.setFormatter(ColoredFormatter(console_format, datefmt=date_format))
        console_handler.addFilter(RunIdFilter())
        root_logger.addHandler(console_handler)

    if enable_file:
        if log_dir is None:
            log_dir = os.environ.get('LOG_DIR', 'logs')
        log_dir = Path(log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)

        app_handler = logging.handlers.RotatingFileHandler(
            log_dir / f'{app_name}.log',
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        app_handler.setLevel(log_level_value)
        app_handler.setFormatter(logging.Formatter(detailed_format, datefmt=date_format))
        app_handler.addFilter(RunIdFilter())
        root_logger.addHandler(app_handler)

        # ERROR and CRITICAL only
        error_handler = logging.handlers.RotatingFileHandler(
            log_dir / f'{app_name}_error.log',
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(logging.Formatter(detailed_format, datefmt=date_format))
        error_handler.addFilter(RunIdFilter())
        root_logger.addHandler(error_handler)

    logger = logging.getLogger(__name__)
    logger.debug('Logging system initialized (level %s)', log_level)
    if enable_file:
        logger.debug('Log directory: %s', log_dir)

    return root_logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for a specific module.

    Args:
        name: Name of the module (typically __name__)

    Returns:
        logging.Logger: Logger instance for the module
    """
    return logging.getLogger(name)


def set_run_id(run_id: Optional[str] = None) -> str:
    """
    Set the run ID for the current context.

    Args:
        run_id: Run ID to set. If None, generates a new UUID.

    Returns:
        str: The run ID that was set
    """
    if run_id is None:
        run_id = str(uuid.uuid4())
    run_id_var.set(run_id)
    return run_id


def get_run_id() -> Optional[str]:
    """Get the current run ID, or None if not set."""
    return run_id_var.get()


def clear_run_id():
    """Clear the run ID from the current context."""
    run_id_var.set(None)
