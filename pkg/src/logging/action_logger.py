import functools
import logging

logger = logging.getLogger("src.cli")


def log_action_method_call(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger.info("Subcommand started: %s", func.__name__)
        result = func(*args, **kwargs)
        logger.info("Subcommand finished: %s", func.__name__)
        return result
    return wrapper
