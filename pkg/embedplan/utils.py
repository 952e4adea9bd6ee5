import json
import logging
import os
import warnings
from pathlib import Path
from typing import Any, Dict

from .exceptions import SpecParsingError

LOG_ENV_VAR = "EMBEDPLAN_LOG"
LOG_LEVELS = {
    "error": logging.ERROR,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def get_log_level(value: str = "") -> int:
    """Logging level named by value, error for unknown names."""
    name = value.strip().lower() or "error"
    if name not in LOG_LEVELS:
        warnings.warn(
            f"Unknown {LOG_ENV_VAR} value '{value}'. "
            f"Valid options are: {', '.join(LOG_LEVELS)}",
            stacklevel=2,
        )
        return logging.ERROR
    return LOG_LEVELS[name]


def configure_logging() -> logging.Logger:
    """Single stderr handler on the package logger, level from environment."""
    logger = logging.getLogger("embedplan")
    logger.setLevel(get_log_level(os.environ.get(LOG_ENV_VAR, "")))
    if not any(getattr(h, "embedplan_handler", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler.embedplan_handler = True  # type: ignore
        logger.addHandler(handler)
    logger.propagate = False
    return logger


def read_json_file(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as json_file:
            return json.load(json_file)
    except ValueError as exc:
        raise SpecParsingError(f"{path} is not a valid json: {exc}") from exc
