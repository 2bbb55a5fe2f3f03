import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

logger = logging.getLogger(__name__)


def sample_fidelities(fn: Callable[[float], float], times: Sequence[float], threads: int = 1) -> list[float]:
    """Evaluate ``fn`` at every time; results keep the order of ``times``."""
    if threads <= 1 or len(times) < 2:
        return [fn(t) for t in times]
    workers = min(threads, len(times))
    logger.debug("Sampling %d times on %d threads", len(times), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, times))
