"""Celery workers for distributed Monte Carlo ensembles.

Each task simulates one fixed chunk of trials. Chunk totals travel as JSON,
whose float encoding round-trips exactly, so a distributed ensemble matches
a local one bit for bit.
"""

import logging
from typing import Any, Dict, Optional

from celery import Celery

from afcsim.core.config import settings
from afcsim.core.exceptions import DomainError
from afcsim.schemas.simulation import ChunkTotals, EnsembleStats
from afcsim.schemas.system import SystemConfig
from afcsim.services.model import validate
from afcsim.services.montecarlo import aggregate, check_seed, chunk_bounds, simulate_chunk

logger = logging.getLogger(__name__)

celery = Celery("afcsim", broker=settings.BROKER_URL, backend=settings.RESULT_BACKEND)
celery.conf.task_serializer = "json"
celery.conf.result_serializer = "json"


@celery.task(name="afcsim.simulate_chunk")
def simulate_chunk_task(config: Dict[str, Any], seed: int, start: int, stop: int) -> Dict[str, Any]:
    totals = simulate_chunk(SystemConfig(**config), seed, start, stop)
    return totals.model_dump()


def dispatch_ensemble(
    config: SystemConfig, trials: int, seed: int, chunk_size: Optional[int] = None
) -> EnsembleStats:
    """Run an ensemble by sending its chunks to Celery workers"""
    if trials < 1:
        raise DomainError(f"trials must be at least 1, got {trials}")
    check_seed(seed)
    derived = validate(config)
    bounds = chunk_bounds(trials, chunk_size or settings.CHUNK_SIZE)
    logger.info("Dispatching %d chunks to Celery (trials=%d seed=%d)", len(bounds), trials, seed)

    payload = config.model_dump()
    results = [
        simulate_chunk_task.delay(payload, seed, start, stop) for start, stop in bounds
    ]
    chunks = [ChunkTotals(**result.get()) for result in results]
    return aggregate(chunks, derived.n_cycles, trials, seed)
