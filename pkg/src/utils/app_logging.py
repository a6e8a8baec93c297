from loguru import logger
from pathlib import Path
from typing import Optional
import os
import sys

_CONFIGURED = False
_CONSOLE_ADDED = False
_DEFAULT_PATH = "logs/mfscan.log"
_FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {extra[context]} | {name}:{function}:{line} | {message}"


def _ensure_logs_dir(path: str) -> None:
    p = Path(path).parent
    p.mkdir(parents=True, exist_ok=True)


def setup_logger(log_path: Optional[str] = None):
    global _CONFIGURED
    if _CONFIGURED:
        return logger

    # Allow override via env var
    log_path = log_path or os.getenv("MFSCAN_LOG_PATH", _DEFAULT_PATH)
    _ensure_logs_dir(log_path)
    logger.remove()
    # records logged without get_context_logger still carry a context field
    logger.configure(extra={"context": "mfscan"})
    logger.add(log_path, rotation="10 MB", retention="7 days", level="DEBUG", format=_FILE_FORMAT)
    # Console logging is opt-in outside the CLI. Enable by setting MFSCAN_CONSOLE_LOGS=1
    if str(os.getenv("MFSCAN_CONSOLE_LOGS", "")).lower() in {"1", "true", "yes", "on"}:
        enable_console_logging()
    _CONFIGURED = True
    return logger


def attach_run_log(run_dir: Path, run_id: str) -> int:
    """Write every record bound with ``run=<run_id>`` to ``<run_dir>/run.log``."""
    setup_logger()
    path = Path(run_dir) / "run.log"
    _ensure_logs_dir(str(path))

    def _filter_run(record):
        return record["extra"].get("run") == run_id

    return logger.add(
        str(path),
        level="DEBUG",
        format="{time:YYYY-MM-DD HH:mm:ss} | {level} | {extra[context]} | {message}",
        filter=_filter_run,
    )


def detach_run_log(sink_id: int) -> None:
    try:
        logger.remove(sink_id)
    except ValueError:
        pass


def get_context_logger(context: str = "mfscan", run: Optional[str] = None):
    setup_logger()
    if run is None:
        return logger.bind(context=context)
    return logger.bind(context=context, run=run)


def enable_console_logging(level: str = "INFO"):
    global _CONSOLE_ADDED
    if _CONSOLE_ADDED:
        return logger
    logger.add(
        sys.stderr,
        level=level,
        format="{time:HH:mm:ss} | {level} | {message}",
    )
    _CONSOLE_ADDED = True
    return logger
