import math

from afcsim.schemas.command import CommandMetadata, OutputTable, SystemArgs
from afcsim.services.analysis import (
    channel_capacity,
    info_per_cycle,
    mmse_closed_form,
    optimal_cycles,
    regime,
    resolve_threshold,
)
from afcsim.services.commands.base import Command
from afcsim.services.estimator import mmse_trajectory
from afcsim.services.model import threshold_condition_holds, validate


class TheoryCommand(Command[SystemArgs]):
    """Theoretical MMSE trajectory with its closed-form approximation"""

    @property
    def metadata(self) -> CommandMetadata:
        return CommandMetadata(
            name="theory",
            description="Exact and closed-form MMSE for every cycle",
            documentation="""
            One row per cycle k = 0..n_cycles.

            Columns:
            - k: cycle index
            - p_exact: MMSE from the exact recursion
            - p_closed_form: exponential law up to n*, hyperbolic law after it
            - regime: PreThreshold or PostThreshold

            Metadata includes n_star, capacity, q_sq and alpha.
            """,
        )

    def execute(self, args: SystemArgs) -> OutputTable:
        config = args.config
        derived = validate(config)
        n_star = resolve_threshold(config.sigma0_sq, config.sigma_v_sq, derived.q_sq)
        trajectory = mmse_trajectory(
            derived, config.sigma0_sq, config.sigma_v_sq, derived.n_cycles
        )

        rows = []
        for k, p_exact in enumerate(trajectory.p):
            p_closed = mmse_closed_form(
                k, config.sigma0_sq, config.sigma_v_sq, derived.q_sq, n_star
            )
            rows.append([k, p_exact, p_closed, regime(k, n_star).value])

        metadata = self.base_metadata(config)
        metadata.update(
            {
                "alpha": derived.alpha,
                "q_sq": derived.q_sq,
                "n_star": n_star,
                "optimal_cycles": None if math.isinf(n_star) else optimal_cycles(n_star),
                "capacity": channel_capacity(config.f0, derived.q_sq),
                "info_per_cycle": info_per_cycle(derived.q_sq),
                "threshold_condition": threshold_condition_holds(config, derived),
            }
        )
        return OutputTable(
            columns=["k", "p_exact", "p_closed_form", "regime"],
            rows=rows,
            metadata=metadata,
        )
