"""
Logging and monitor trail for isotoda.

This module provides structured logging, a dedicated logger for the
invariant monitors (drift checks, determinant checks, Euler checks) and
optional rotating log files. Results are written to stdout by the CLI,
so every handler configured here writes to stderr or to files.
"""

import json
import logging
import logging.handlers
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

from rich.console import Console
from rich.logging import RichHandler


_VALID_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']

# Extra attributes copied into structured records when present.
_EXTRA_FIELDS = (
    'component', 'command', 'monitor', 'step', 'value',
    'tolerance', 'passed', 'duration_ms',
)


@dataclass
class LogConfig:
    """Configuration for the logging system."""
    log_dir: Optional[str] = None
    log_level: str = "WARNING"
    max_file_size_mb: int = 10
    backup_count: int = 3
    console_logging: bool = True
    structured_format: bool = False

    def __post_init__(self):
        """Validate log configuration."""
        if self.log_level.upper() not in _VALID_LEVELS:
            raise ValueError(f"log_level must be one of {_VALID_LEVELS}")
        if self.max_file_size_mb < 1:
            raise ValueError("max_file_size_mb must be at least 1")
        if self.backup_count < 0:
            raise ValueError("backup_count must be non-negative")


class StructuredFormatter(logging.Formatter):
    """JSON formatter for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as a single JSON line."""
        log_entry: Dict[str, Any] = {
            'timestamp': datetime.fromtimestamp(record.created).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
        }

        for name in _EXTRA_FIELDS:
            if hasattr(record, name):
                log_entry[name] = getattr(record, name)

        if record.exc_info and record.exc_info != (None, None, None):
            log_entry['exception'] = self.formatException(record.exc_info)

        return json.dumps(log_entry, ensure_ascii=False, default=str)


class MonitorLogger:
    """Records the outcome of every invariant monitor."""

    def __init__(self, name: str = 'isotoda.monitor'):
        self.logger = logging.getLogger(name)

    def log_monitor(self, monitor: str, value: float, tolerance: float,
                    passed: bool, **kwargs: Any) -> None:
        """Log one monitor evaluation.

        Args:
            monitor: Name of the monitored quantity (e.g. ``spectrum_drift``).
            value: Observed deviation.
            tolerance: Allowed deviation.
            passed: Whether the check held.
            **kwargs: Extra structured fields such as ``step`` or ``component``.
        """
        extra = {
            'monitor': monitor,
            'value': value,
            'tolerance': tolerance,
            'passed': passed,
            **kwargs,
        }
        status = 'ok' if passed else 'FAILED'
        message = f"monitor {monitor}: {value:.3e} (tol {tolerance:.1e}) {status}"
        self.logger.log(logging.DEBUG if passed else logging.WARNING, message, extra=extra)


class LoggingService:
    """Configures the ``isotoda`` logger tree for a CLI run."""

    def __init__(self, log_config: Optional[LogConfig] = None,
                 console: Optional[Console] = None):
        self.log_config = log_config or LogConfig()
        self.monitor = MonitorLogger()

        self.logger = logging.getLogger('isotoda')
        self.logger.setLevel(getattr(logging, self.log_config.log_level.upper()))
        self.logger.propagate = False

        # Clear any existing handlers
        self.logger.handlers.clear()

        self._setup_handlers(console)

    def _setup_handlers(self, console: Optional[Console]) -> None:
        """Setup console and file handlers."""
        if self.log_config.console_logging:
            if self.log_config.structured_format:
                console_handler: logging.Handler = logging.StreamHandler()
                console_handler.setFormatter(StructuredFormatter())
            else:
                console_handler = RichHandler(
                    console=console or Console(stderr=True),
                    show_path=False,
                    rich_tracebacks=False,
                )
                console_handler.setFormatter(logging.Formatter('%(message)s'))
            self.logger.addHandler(console_handler)

        if self.log_config.log_dir:
            log_dir = Path(self.log_config.log_dir)
            log_dir.mkdir(parents=True, exist_ok=True)
            file_handler = logging.handlers.RotatingFileHandler(
                log_dir / 'isotoda.log',
                maxBytes=self.log_config.max_file_size_mb * 1024 * 1024,
                backupCount=self.log_config.backup_count,
            )
            if self.log_config.structured_format:
                file_handler.setFormatter(StructuredFormatter())
            else:
                file_handler.setFormatter(logging.Formatter(
                    '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
                ))
            self.logger.addHandler(file_handler)

    def get_logger(self, name: str) -> logging.Logger:
        """Get a logger instance for a specific component."""
        return logging.getLogger(f'isotoda.{name}')

    def log_run_start(self, command: str, parameters: Dict[str, Any]) -> None:
        """Log the start of a CLI command."""
        summary = ", ".join(f"{key}={value}" for key, value in sorted(parameters.items()))
        self.logger.info(
            f"Running {command} ({summary})",
            extra={'component': 'cli', 'command': command},
        )

    def log_run_end(self, command: str, duration_ms: float, exit_code: int) -> None:
        """Log the end of a CLI command."""
        level = logging.INFO if exit_code == 0 else logging.WARNING
        self.logger.log(
            level,
            f"{command} finished with exit code {exit_code}",
            extra={'component': 'cli', 'command': command, 'duration_ms': duration_ms},
        )

    def close(self) -> None:
        """Detach and close all handlers."""
        for handler in list(self.logger.handlers):
            handler.close()
            self.logger.removeHandler(handler)
