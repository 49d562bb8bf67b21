import argparse
from typing import Any, Dict, List, Optional, Tuple

from afcsim.core.exceptions import DomainError
from afcsim.schemas.command import CommandMetadata, OutputTable, SystemArgs
from afcsim.schemas.system import SystemConfig
from afcsim.services.analysis import (
    channel_capacity,
    delivered_bits,
    output_bit_rate_closed_form,
    rate_from_bits,
    regime,
    resolve_threshold,
)
from afcsim.services.commands.base import Command, parse_n_range
from afcsim.services.estimator import mmse_trajectory
from afcsim.services.model import validate


class SweepArgs(SystemArgs):
    """Arguments for an output bit-rate sweep"""

    n_range: Optional[Tuple[int, int]] = None  # inclusive; defaults to 1..n_cycles
    n_zeta_values: List[float] = []  # one sub-sweep per forward noise density


def resolve_n_range(args: SweepArgs, n_cycles: int) -> range:
    first, last = args.n_range or (1, n_cycles)
    if first < 1 or last < first:
        raise DomainError(f"cycle range {first}:{last} is empty")
    return range(first, last + 1)


class SweepCommand(Command[SweepArgs]):
    """Output bit-rate as a function of the number of cycles"""

    @property
    def metadata(self) -> CommandMetadata:
        return CommandMetadata(
            name="sweep",
            description="Output bit-rate over a range of cycle counts",
            documentation="""
            One row per cycle count n (and per n_zeta when several are given).

            Columns:
            - n_zeta: forward-channel noise density of the sub-sweep
            - n: cycles per sample
            - output_rate: bit/s from the exact MMSE recursion
            - regime: PreThreshold or PostThreshold
            - p_n: exact MMSE after n cycles
            - output_rate_closed_form: bit/s from the closed-form laws

            Optional arguments:
            - n_range: inclusive first:last cycle range (default 1:n_cycles)
            - n_zeta_values: forward noise densities, one sub-sweep each
            """,
        )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--n-range", type=parse_n_range, default=None)
        parser.add_argument(
            "--n-zeta-values", type=float, nargs="+", default=[],
            help="run one sub-sweep per forward noise density",
        )

    def cli_args(
        self, namespace: argparse.Namespace, config: Optional[SystemConfig]
    ) -> Dict[str, Any]:
        return {
            "config": config,
            "n_range": namespace.n_range,
            "n_zeta_values": namespace.n_zeta_values,
        }

    def execute(self, args: SweepArgs) -> OutputTable:
        configs = [
            args.config.model_copy(update={"n_zeta": value})
            for value in args.n_zeta_values
        ] or [args.config]

        rows = []
        sub_sweeps = []
        for config in configs:
            derived = validate(config)
            n_values = resolve_n_range(args, derived.n_cycles)
            n_star = resolve_threshold(config.sigma0_sq, config.sigma_v_sq, derived.q_sq)
            capacity = channel_capacity(config.f0, derived.q_sq)
            trajectory = mmse_trajectory(
                derived, config.sigma0_sq, config.sigma_v_sq, n_values[-1]
            )
            bits = delivered_bits(
                derived.q_sq, config.sigma0_sq, config.sigma_v_sq, n_values[-1]
            )
            for n in n_values:
                p_n = trajectory.p[n]
                rows.append(
                    [
                        config.n_zeta,
                        n,
                        rate_from_bits(n, config.f0, bits[n]),
                        regime(n, n_star).value,
                        p_n,
                        output_bit_rate_closed_form(n, n_star, capacity, config.f0),
                    ]
                )
            sub_sweeps.append(
                {
                    "n_zeta": config.n_zeta,
                    "q_sq": derived.q_sq,
                    "n_star": n_star,
                    "capacity": capacity,
                }
            )

        metadata = self.base_metadata(args.config)
        metadata["n_range"] = list(args.n_range) if args.n_range else None
        metadata["n_zeta_values"] = args.n_zeta_values
        metadata["sub_sweeps"] = sub_sweeps
        return OutputTable(
            columns=[
                "n_zeta", "n", "output_rate", "regime", "p_n", "output_rate_closed_form",
            ],
            rows=rows,
            metadata=metadata,
        )
