"""Logging set-up driven by the ``FRONTTRACK_LOG`` environment variable."""

import logging
import os

LOG_ENV_VAR = "FRONTTRACK_LOG"
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"


def resolve_level(raw: str | None) -> int:
    if raw is None or not raw.strip():
        return logging.WARNING

    value = raw.strip()
    if value.isdigit():
        return int(value)

    level = logging.getLevelName(value.upper())
    if isinstance(level, int):
        return level
    return logging.WARNING


def configure_logging(level: int | None = None) -> int:
    """
    Configure root logging once per process.

    The explicit ``level`` wins over the environment; returns the level in use.
    """
    if level is None:
        level = resolve_level(os.environ.get(LOG_ENV_VAR))

    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)
    logging.captureWarnings(True)
    return level
