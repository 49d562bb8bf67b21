import argparse
import logging
import math
from typing import Any, Dict, Optional

from pydantic import PositiveInt

from afcsim.core.config import settings
from afcsim.schemas.command import CommandMetadata, OutputTable, SystemArgs
from afcsim.schemas.system import SystemConfig
from afcsim.services.commands.base import Command
from afcsim.services.estimator import mmse_trajectory
from afcsim.services.model import validate
from afcsim.services.modulator import any_overmod_probability
from afcsim.services.montecarlo import compare, run_ensemble


class SimulateArgs(SystemArgs):
    """Arguments for a Monte Carlo ensemble run"""

    trials: int = settings.DEFAULT_TRIALS
    seed: int = settings.DEFAULT_SEED
    workers: int = 1
    chunk_size: PositiveInt = settings.CHUNK_SIZE  # echoed; it sets the float rounding
    use_celery: bool = False


class SimulateCommand(Command[SimulateArgs]):
    """Monte Carlo ensemble compared against the theoretical MMSE"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    @property
    def metadata(self) -> CommandMetadata:
        return CommandMetadata(
            name="simulate",
            description="Monte Carlo MSE and clip rate against the theoretical MMSE",
            documentation="""
            One row per cycle k = 0..n_cycles, then one summary row.

            Columns:
            - k: cycle index
            - mse: empirical mean squared error
            - stderr: standard error of mse
            - p_k: theoretical MMSE
            - z: (mse - p_k) / stderr
            - mean_error: empirical bias of the estimate
            - clean_mse: mse over trials that never over-modulated
            - clip_rate: fraction of trials over-modulating at cycle k

            The summary row has k = "clip" and holds, in column order, the
            overall clip rate, its binomial half-width, mu, the clip-rate
            z-score, the fraction of trials with any clip, the predicted
            fraction and the overall clip rate again.

            Required arguments:
            - trials, seed

            Optional arguments:
            - chunk_size: trials per chunk; chunks are reduced in order, so the
              table depends on it but not on workers or Celery
            """,
        )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--trials", type=int, default=settings.DEFAULT_TRIALS)
        parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
        parser.add_argument("--workers", type=int, default=settings.WORKERS)
        parser.add_argument("--chunk-size", type=int, default=settings.CHUNK_SIZE)
        parser.add_argument(
            "--celery", action="store_true",
            help="dispatch trial chunks to Celery workers",
        )

    def cli_args(
        self, namespace: argparse.Namespace, config: Optional[SystemConfig]
    ) -> Dict[str, Any]:
        return {
            "config": config,
            "trials": namespace.trials,
            "seed": namespace.seed,
            "workers": namespace.workers,
            "chunk_size": namespace.chunk_size,
            "use_celery": namespace.celery,
        }

    def execute(self, args: SimulateArgs) -> OutputTable:
        config = args.config
        derived = validate(config)
        n = derived.n_cycles

        if args.use_celery:
            from afcsim.worker import dispatch_ensemble

            stats = dispatch_ensemble(
                config, args.trials, args.seed, chunk_size=args.chunk_size
            )
        else:
            stats = run_ensemble(
                config,
                args.trials,
                args.seed,
                workers=args.workers,
                chunk_size=args.chunk_size,
            )

        trajectory = mmse_trajectory(derived, config.sigma0_sq, config.sigma_v_sq, n)
        report = compare(stats, trajectory, config.mu)

        rows = []
        for k in range(n + 1):
            rows.append(
                [
                    k,
                    stats.mean_sq_error[k],
                    stats.sq_error_stderr[k],
                    trajectory.p[k],
                    report.z_scores[k],
                    stats.mean_error[k],
                    stats.clean_mean_sq_error[k],
                    stats.clip_rate_per_cycle[k - 1] if k else 0.0,
                ]
            )
        events = stats.trials * n
        clip_z = (
            (stats.clip_rate - config.mu) / math.sqrt(config.mu * (1.0 - config.mu) / events)
            if events
            else 0.0
        )
        rows.append(
            [
                "clip",
                stats.clip_rate,
                stats.clip_halfwidth,
                config.mu,
                clip_z,
                stats.any_clip_fraction,
                any_overmod_probability(config.mu, n),
                stats.clip_rate,
            ]
        )

        metadata = self.base_metadata(config)
        metadata.update(
            {
                "seed": args.seed,
                "trials": args.trials,
                "chunk_size": args.chunk_size,
                "generator": stats.generator,
                "alpha": derived.alpha,
                "q_sq": derived.q_sq,
                "max_abs_z": report.max_abs_z,
                "clip_band": list(report.clip_band),
                "clip_rate_ok": report.clip_rate_ok,
                "bias_ok": report.bias_ok,
                "passed": report.passed,
            }
        )
        self.logger.info("Simulation %s", "passed" if report.passed else "failed")
        return OutputTable(
            columns=[
                "k", "mse", "stderr", "p_k", "z", "mean_error", "clean_mse", "clip_rate",
            ],
            rows=rows,
            metadata=metadata,
            passed=report.passed,
        )
