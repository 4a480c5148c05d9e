"""
Logging and result recording for the coexistence toolkit.

Library modules log through children of the ``coexistence`` logger with
``extra`` fields; this module attaches the JSON formatter once and keeps the
JSON-lines result log of search queries.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Optional

from pythonjsonlogger import jsonlogger

from .config import CoexistenceConfig
from .models import SearchResult

LOGGER_NAME = 'coexistence'


class CoexistenceLogger:
    """
    Structured JSON logging on stderr.

    Reports go to stdout, so log records never mix with command output.
    """

    def __init__(self, config: CoexistenceConfig):
        """Initialize the logger with configuration."""
        self.config = config
        self._setup_logger()

    def _setup_logger(self) -> None:
        self.logger = logging.getLogger(LOGGER_NAME)
        self.logger.setLevel(getattr(logging, self.config.log_level.upper(), logging.INFO))
        self.logger.propagate = False
        for handler in list(self.logger.handlers):
            if getattr(handler, '_coexistence', False):
                self.logger.removeHandler(handler)
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(jsonlogger.JsonFormatter('%(asctime)s %(name)s %(levelname)s %(message)s'))
        handler._coexistence = True
        self.logger.addHandler(handler)

    def log_event(self, message: str, fields: Optional[Dict[str, Any]] = None) -> None:
        self.logger.info(message, extra={'log_type': 'event', **(fields or {})})

    def log_error(self, error_message: str, error_context: Optional[Dict[str, Any]] = None) -> None:
        """
        Log an error with optional context information.

        Args:
            error_message: Description of the error
            error_context: Optional additional context information
        """
        self.logger.error(error_message, extra={'log_type': 'error', 'context': error_context or {}})

    def log_metric_event(self, metric_name: str, value: float,
                         dimensions: Optional[Dict[str, str]] = None) -> None:
        self.logger.info(metric_name, extra={
            'log_type': 'metric',
            'metric_name': metric_name,
            'value': value,
            'dimensions': dimensions or {},
        })


class ResultLogWriter:
    """Appends one JSON object per search query to a JSON-lines file."""

    def __init__(self, path: str):
        self.path = path

    def write(self, record: Dict[str, Any]) -> None:
        entry = dict(record)
        entry.setdefault('timestamp', datetime.now(timezone.utc).isoformat())
        entry.setdefault('log_version', '1.0')
        with open(self.path, 'a', encoding='utf-8') as handle:
            handle.write(json.dumps(entry, ensure_ascii=False, sort_keys=True) + '\n')


class MonitoringManager:
    """
    Single entry point for logging and result recording.

    The orchestrator talks only to this facade.
    """

    def __init__(self, config: CoexistenceConfig):
        self.config = config
        self.logger = CoexistenceLogger(config)
        self.result_log = ResultLogWriter(config.result_log_path) if config.result_log_path else None

    def record_search_result(self, result: SearchResult) -> bool:
        """
        Log a search outcome and append it to the result log when one is configured.

        Returns:
            bool: True if the result log was written, False otherwise
        """
        record = result.to_log_record()
        self.logger.log_event('search result recorded', record)
        if self.result_log is None:
            return False
        try:
            self.result_log.write(record)
            return True
        except OSError as e:
            self.logger.log_error('Failed to write result log', {'path': self.result_log.path, 'error': str(e)})
            return False

    def record_command(self, command: str, exit_code: int) -> None:
        self.logger.log_event('command finished', {'command': command, 'exit_code': exit_code})

    def record_error(self, error_message: str, error_context: Optional[Dict[str, Any]] = None) -> None:
        self.logger.log_error(error_message, error_context)

    def record_performance_metric(self, operation: str, duration_ms: float) -> None:
        self.logger.log_metric_event(
            metric_name=f'{operation}_duration',
            value=duration_ms,
            dimensions={'operation': operation},
        )
