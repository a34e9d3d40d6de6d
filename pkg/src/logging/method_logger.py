import logging
import time

import aspectlib

logger = logging.getLogger("src.numerics")


@aspectlib.Aspect(bind=True)
def log_method_call(cutpoint, *args, **kwargs):
    """Log a numerical call at DEBUG together with its wall time."""
    name = getattr(cutpoint, "__qualname__", repr(cutpoint))
    started = time.perf_counter()
    logger.debug("%s called with kwargs=%s", name, sorted(kwargs))
    result = yield aspectlib.Proceed
    logger.debug("%s returned %s in %.3fs", name, type(result).__name__, time.perf_counter() - started)
    yield aspectlib.Return(result)
