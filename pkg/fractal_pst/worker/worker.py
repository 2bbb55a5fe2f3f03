import logging
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..config import settings
from ..schemas import JobStatus, SuiteResult
from .suites import (
    process_chain_certification,
    process_chain_fidelity,
    process_dynamics_oracle,
    process_mixed_family,
    process_negative_control,
    process_projection_identities,
    process_round_trip,
    process_standard_diamonds,
)

logger = logging.getLogger(__name__)

# === SUITE REGISTRY ===
SUITE_HANDLERS = {
    "chain_certification": process_chain_certification,
    "chain_fidelity": process_chain_fidelity,
    "standard_diamonds": process_standard_diamonds,
    "mixed_family": process_mixed_family,
    "round_trip": process_round_trip,
    "projection_identities": process_projection_identities,
    "dynamics_oracle": process_dynamics_oracle,
    "negative_control": process_negative_control,
}


def run_suites(names: list[str] | None = None, seed: int | None = None, threads: int | None = None) -> list[SuiteResult]:
    """Run the named suites (all by default); results keep the requested order."""
    names = list(names or SUITE_HANDLERS)
    seed = settings.seed if seed is None else seed
    threads = settings.threads if threads is None else threads
    logger.info("Running %d suites with seed %d", len(names), seed)
    if threads <= 1:
        return [_process_suite(name, seed) for name in names]
    with ThreadPoolExecutor(max_workers=min(threads, len(names))) as pool:
        return list(pool.map(lambda name: _process_suite(name, seed), names))


def _process_suite(name: str, seed: int) -> SuiteResult:
    suite = SuiteResult(name=name, status=JobStatus.PENDING)
    handler = SUITE_HANDLERS.get(name)
    if not handler:
        logger.error("No handler for suite %s", name)
        return _update_status(suite, JobStatus.FAILED, error="Unknown suite")

    logger.info("Processing suite %s", name)
    suite = _update_status(suite, JobStatus.RUNNING)
    started = time.perf_counter()
    try:
        # every suite draws from its own stream so selection order does not matter
        result = handler(np.random.default_rng(seed))
    except Exception as e:
        logger.exception("Suite %s failed", name)
        return _update_status(suite, JobStatus.FAILED, error=str(e))

    logger.info("Suite %s completed in %.2fs", name, time.perf_counter() - started)
    return _update_status(suite, JobStatus.DONE, result=result)


def _update_status(suite: SuiteResult, status: JobStatus, result: dict | None = None, error: str | None = None) -> SuiteResult:
    logger.debug("Suite %s: %s -> %s", suite.name, suite.status.value, status.value)
    return suite.model_copy(update={"status": status, "result": result, "error": error})
