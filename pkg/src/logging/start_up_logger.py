import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(verbosity: int = 0) -> None:
    """
    Route package logging to stderr.

    Args:
        verbosity: 0 for warnings only, 1 for INFO, 2 or more for DEBUG
    """
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    root = logging.getLogger("src")
    root.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    logging.captureWarnings(True)


def log_start_up(version: str, subcommand: str) -> None:
    logging.getLogger("src.cli").info("Twisted cohomology laboratory %s: %s", version, subcommand)
