import argparse
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import PositiveInt

from afcsim.schemas.command import CommandMetadata, OutputTable, SystemArgs
from afcsim.schemas.system import SystemConfig
from afcsim.services.analysis import (
    boundary_curve,
    efficiency_point,
    regime,
    resolve_threshold,
    shannon_boundary,
)
from afcsim.services.commands.base import Command, parse_n_range
from afcsim.services.commands.sweep import resolve_n_range
from afcsim.services.model import to_db, validate


class EfficiencyArgs(SystemArgs):
    """Arguments for a power-bandwidth efficiency sweep"""

    n_range: Optional[Tuple[int, int]] = None
    boundary_points: PositiveInt = 32


class EfficiencyCommand(Command[EfficiencyArgs]):
    """Power-bandwidth efficiency points against the Shannon boundary"""

    @property
    def metadata(self) -> CommandMetadata:
        return CommandMetadata(
            name="efficiency",
            description="Efficiency-plane points and their distance to the Shannon boundary",
            documentation="""
            One row per cycle count n.

            Columns:
            - n: cycles per sample
            - spectral_eff: R_n / F0
            - ebit_over_n: E_bit / N_zeta
            - boundary: Shannon-boundary E_bit / N at the same spectral efficiency
            - gap: ebit_over_n - boundary
            - ebit_over_n_db: ebit_over_n in dB
            - regime: PreThreshold or PostThreshold

            The metadata key boundary_curve holds Shannon-boundary samples
            spanning the plotted spectral efficiencies.
            """,
        )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--n-range", type=parse_n_range, default=None)
        parser.add_argument("--boundary-points", type=int, default=32)

    def cli_args(
        self, namespace: argparse.Namespace, config: Optional[SystemConfig]
    ) -> Dict[str, Any]:
        return {
            "config": config,
            "n_range": namespace.n_range,
            "boundary_points": namespace.boundary_points,
        }

    def execute(self, args: EfficiencyArgs) -> OutputTable:
        config = args.config
        derived = validate(config)
        n_star = resolve_threshold(config.sigma0_sq, config.sigma_v_sq, derived.q_sq)

        rows = []
        for n in resolve_n_range(args, derived.n_cycles):
            point = efficiency_point(
                derived, config.sigma0_sq, config.sigma_v_sq, n, config.f0
            )
            rows.append(
                [
                    n,
                    point.spectral_eff,
                    point.ebit_over_n,
                    shannon_boundary(point.spectral_eff),
                    point.boundary_gap,
                    float(to_db(point.ebit_over_n)),
                    regime(n, n_star).value,
                ]
            )

        top = max(row[1] for row in rows)
        grid = np.linspace(top / args.boundary_points, 1.5 * top, args.boundary_points)
        metadata = self.base_metadata(config)
        metadata.update(
            {
                "n_range": list(args.n_range) if args.n_range else None,
                "n_star": n_star,
                "boundary_curve": [list(pair) for pair in boundary_curve(grid.tolist())],
            }
        )
        return OutputTable(
            columns=[
                "n", "spectral_eff", "ebit_over_n", "boundary", "gap",
                "ebit_over_n_db", "regime",
            ],
            rows=rows,
            metadata=metadata,
        )
