import logging
import sys
from typing import Optional

LOGGER_NAME = "ptquartic"


def setup_logging(level: int = logging.INFO, log_file: Optional[str] = None):
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    return logger


# Engines log through this; handlers are attached by setup_logging() in the CLI
logger = logging.getLogger(LOGGER_NAME)
