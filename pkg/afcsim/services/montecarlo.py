"""Seeded Monte Carlo ensembles of complete sample transmissions.

Every trial owns an independent random stream derived from the master seed
and the trial index, so results do not depend on how trials are grouped
or on how many workers run them. Trials are simulated in fixed-size chunks
and the chunk totals are always reduced in chunk order.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Optional, Tuple

import numpy as np

from afcsim.core.config import settings
from afcsim.core.exceptions import DomainError, LengthMismatchError
from afcsim.schemas.simulation import (
    ChunkTotals,
    ComparisonReport,
    EnsembleStats,
    TrialRecord,
)
from afcsim.schemas.state import MmseTrajectory
from afcsim.schemas.system import DerivedParams, SystemConfig
from afcsim.services.estimator import gain_schedule, update
from afcsim.services.model import validate
from afcsim.services.modulator import emit_array

logger = logging.getLogger(__name__)

SEED_LIMIT = 2**64

GENERATOR = (
    "numpy PCG64, per-trial SeedSequence(entropy=seed, spawn_key=(trial,)), "
    "standard_normal (ziggurat), draw order x, v_1..v_n, zeta_1..zeta_n"
)


def check_seed(seed: int) -> int:
    if not 0 <= seed < SEED_LIMIT:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def trial_stream(seed: int, trial: int) -> np.random.Generator:
    """Independent random stream for one trial of an ensemble"""
    sequence = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=(trial,))
    return np.random.Generator(np.random.PCG64(sequence))


def _draw(
    stream: np.random.Generator, config: SystemConfig, derived: DerivedParams
) -> Tuple[float, np.ndarray, np.ndarray]:
    n = derived.n_cycles
    z = stream.standard_normal(1 + 2 * n)
    x = config.x0 + math.sqrt(config.sigma0_sq) * z[0]
    v = math.sqrt(config.sigma_v_sq) * z[1 : n + 1]
    zeta = math.sqrt(derived.sigma_zeta_sq) * z[n + 1 :]
    return x, v, zeta


def _transmit(
    x: np.ndarray,
    v: np.ndarray,
    zeta: np.ndarray,
    x0: float,
    a: float,
    m: np.ndarray,
    l: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """Run the feedback loop for a batch of samples.

    ``x`` has shape (trials,), ``v`` and ``zeta`` (trials, n). Returns the
    estimates after each cycle and the clip flags, both (trials, n).
    """
    trials, n = v.shape
    estimates = np.empty((trials, n))
    clipped = np.empty((trials, n), dtype=bool)
    x_hat = np.full(trials, x0)
    for k in range(n):
        # feedback noise enters the position seen by the modulator, never its gain
        e = x - x_hat - v[:, k]
        emitted, clipped[:, k] = emit_array(e, m[k])
        y_tilde = a * emitted + zeta[:, k]
        x_hat = update(x_hat, l[k], y_tilde)
        estimates[:, k] = x_hat
    return estimates, clipped


def run_trial(
    config: SystemConfig, derived: DerivedParams, stream: np.random.Generator
) -> TrialRecord:
    """Simulate the transmission of one sample"""
    n = derived.n_cycles
    m, l = gain_schedule(derived, config.sigma0_sq, config.sigma_v_sq, n)
    x, v, zeta = _draw(stream, config, derived)
    estimates, clipped = _transmit(
        np.array([x]), v[None, :], zeta[None, :], config.x0, derived.a, m, l
    )
    sq_errors = (x - estimates[0]) ** 2
    return TrialRecord(
        x_true=x,
        x0=config.x0,
        estimates=tuple(estimates[0].tolist()),
        sq_errors=tuple(sq_errors.tolist()),
        clip_flags=tuple(clipped[0].tolist()),
    )


def simulate_chunk(
    config: SystemConfig, seed: int, start: int, stop: int
) -> ChunkTotals:
    """Partial sums for trials start..stop-1"""
    derived = validate(config)
    n = derived.n_cycles
    m, l = gain_schedule(derived, config.sigma0_sq, config.sigma_v_sq, n)

    count = stop - start
    x = np.empty(count)
    v = np.empty((count, n))
    zeta = np.empty((count, n))
    for row, trial in enumerate(range(start, stop)):
        x[row], v[row], zeta[row] = _draw(trial_stream(seed, trial), config, derived)

    estimates, clipped = _transmit(x, v, zeta, config.x0, derived.a, m, l)
    # column 0 is the prior estimate x0
    err = x[:, None] - np.concatenate([np.full((count, 1), config.x0), estimates], axis=1)
    sq = err**2
    clean = ~clipped.any(axis=1)

    return ChunkTotals(
        start=start,
        stop=stop,
        sum_err=err.sum(axis=0).tolist(),
        sum_sq_err=sq.sum(axis=0).tolist(),
        sum_sq_err_sq=(sq**2).sum(axis=0).tolist(),
        clip_counts=clipped.sum(axis=0).tolist(),
        clean_trials=int(clean.sum()),
        clean_sum_sq_err=sq[clean].sum(axis=0).tolist(),
    )


def chunk_bounds(trials: int, chunk_size: int) -> List[Tuple[int, int]]:
    if chunk_size < 1:
        raise DomainError(f"chunk_size must be positive, got {chunk_size}")
    return [(s, min(s + chunk_size, trials)) for s in range(0, trials, chunk_size)]


def _stderr(total: np.ndarray, total_sq: np.ndarray, trials: int) -> np.ndarray:
    mean = total / trials
    if trials < 2:
        return np.zeros_like(mean)
    variance = np.maximum(total_sq - trials * mean**2, 0.0) / (trials - 1)
    return np.sqrt(variance / trials)


def aggregate(
    chunks: Iterable[ChunkTotals], n: int, trials: int, seed: int
) -> EnsembleStats:
    """Reduce chunk totals, in chunk order, into ensemble statistics"""
    ordered = sorted(chunks, key=lambda c: c.start)
    covered = sum(c.trials for c in ordered)
    if covered != trials:
        raise DomainError(f"Chunks cover {covered} trials, expected {trials}")

    sum_err = np.zeros(n + 1)
    sum_sq = np.zeros(n + 1)
    sum_sq_sq = np.zeros(n + 1)
    clean_sum_sq = np.zeros(n + 1)
    clip_counts = np.zeros(n, dtype=np.int64)
    clean_trials = 0
    for chunk in ordered:
        sum_err += chunk.sum_err
        sum_sq += chunk.sum_sq_err
        sum_sq_sq += chunk.sum_sq_err_sq
        clean_sum_sq += chunk.clean_sum_sq_err
        clip_counts += np.asarray(chunk.clip_counts, dtype=np.int64)
        clean_trials += chunk.clean_trials

    events = trials * n
    clip_rate = float(clip_counts.sum()) / events if events else 0.0
    clip_halfwidth = math.sqrt(clip_rate * (1.0 - clip_rate) / events) if events else 0.0
    clean_mse = (
        clean_sum_sq / clean_trials if clean_trials else np.full(n + 1, math.nan)
    )

    return EnsembleStats(
        trials=trials,
        seed=seed,
        n=n,
        mean_sq_error=tuple((sum_sq / trials).tolist()),
        sq_error_stderr=tuple(_stderr(sum_sq, sum_sq_sq, trials).tolist()),
        mean_error=tuple((sum_err / trials).tolist()),
        error_stderr=tuple(_stderr(sum_err, sum_sq, trials).tolist()),
        clip_rate=clip_rate,
        clip_halfwidth=clip_halfwidth,
        clip_rate_per_cycle=tuple((clip_counts / trials).tolist()),
        any_clip_fraction=1.0 - clean_trials / trials,
        clean_mean_sq_error=tuple(clean_mse.tolist()),
        generator=GENERATOR,
    )


def run_ensemble(
    config: SystemConfig,
    trials: int,
    seed: int,
    workers: Optional[int] = None,
    chunk_size: Optional[int] = None,
) -> EnsembleStats:
    """Simulate ``trials`` independent transmissions and aggregate them"""
    if trials < 1:
        raise DomainError(f"trials must be at least 1, got {trials}")
    check_seed(seed)
    derived = validate(config)
    workers = workers or settings.WORKERS
    bounds = chunk_bounds(trials, chunk_size or settings.CHUNK_SIZE)
    logger.info(
        "Running ensemble: trials=%d seed=%d chunks=%d workers=%d",
        trials, seed, len(bounds), workers,
    )

    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(simulate_chunk, config, seed, start, stop)
                for start, stop in bounds
            ]
            chunks = [future.result() for future in futures]
    else:
        chunks = [simulate_chunk(config, seed, start, stop) for start, stop in bounds]

    stats = aggregate(chunks, derived.n_cycles, trials, seed)
    logger.info("Ensemble finished: clip_rate=%.6g", stats.clip_rate)
    return stats


def _z_score(observed: float, expected: float, stderr: float) -> float:
    if stderr > 0:
        return (observed - expected) / stderr
    return 0.0 if observed == expected else math.inf


def compare(
    stats: EnsembleStats,
    trajectory: MmseTrajectory,
    mu: float,
    z_limit: float = 4.0,
    clip_allowance: float = 2.0,
) -> ComparisonReport:
    """Check empirical MSE and clip rate against theory.

    Each cycle passes when |MSE - P_k| <= z_limit * stderr + clip_allowance * mu * P_k;
    the extra term budgets the O(mu) bias the saturating modulator adds to the
    linear-model MMSE. The clip rate must lie within z_limit binomial sigmas of mu.
    """
    if trajectory.n != stats.n:
        raise LengthMismatchError(stats.n, trajectory.n)

    z_scores = []
    within = []
    for observed, stderr, expected in zip(
        stats.mean_sq_error, stats.sq_error_stderr, trajectory.p
    ):
        z_scores.append(_z_score(observed, expected, stderr))
        within.append(
            abs(observed - expected) <= z_limit * stderr + clip_allowance * mu * expected
        )

    events = stats.trials * stats.n
    if events:
        half = z_limit * math.sqrt(mu * (1.0 - mu) / events)
        band = (mu - half, mu + half)
        clip_rate_ok = band[0] <= stats.clip_rate <= band[1]
    else:
        band = (0.0, 0.0)
        clip_rate_ok = True

    bias_ok = all(
        abs(_z_score(mean, 0.0, stderr)) <= z_limit
        for mean, stderr in zip(stats.mean_error, stats.error_stderr)
    )
    passed = all(within) and clip_rate_ok
    report = ComparisonReport(
        z_scores=tuple(z_scores),
        max_abs_z=max(abs(z) for z in z_scores),
        mse_within_tolerance=tuple(within),
        clip_rate=stats.clip_rate,
        clip_band=band,
        clip_rate_ok=clip_rate_ok,
        bias_ok=bias_ok,
        passed=passed,
    )
    logger.info(
        "Comparison: max|z|=%.3g clip_rate_ok=%s passed=%s",
        report.max_abs_z, clip_rate_ok, passed,
    )
    return report
