import argparse
from typing import Any, Dict, Optional

import numpy as np
from pydantic import PositiveInt

from afcsim.schemas.command import CommandArgs, CommandMetadata, OutputTable
from afcsim.schemas.system import SystemConfig
from afcsim.services.analysis import boundary_curve
from afcsim.services.commands.base import Command
from afcsim.services.model import to_db


class BoundaryArgs(CommandArgs):
    """Arguments for sampling the Shannon boundary"""

    r_min: float = 0.05
    r_max: float = 8.0
    points: PositiveInt = 64


class BoundaryCommand(Command[BoundaryArgs]):
    """Samples of the Shannon boundary on the efficiency plane"""

    @property
    def metadata(self) -> CommandMetadata:
        return CommandMetadata(
            name="boundary",
            description="Shannon-boundary curve samples",
            documentation="""
            Columns: spectral_eff, ebit_over_n, ebit_over_n_db.

            Optional arguments:
            - r_min, r_max: spectral-efficiency range (bit/s/Hz)
            - points: number of evenly spaced samples
            """,
        )

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--r-min", type=float, default=0.05)
        parser.add_argument("--r-max", type=float, default=8.0)
        parser.add_argument("--points", type=int, default=64)

    def cli_args(
        self, namespace: argparse.Namespace, config: Optional[SystemConfig]
    ) -> Dict[str, Any]:
        return {
            "r_min": namespace.r_min,
            "r_max": namespace.r_max,
            "points": namespace.points,
        }

    def execute(self, args: BoundaryArgs) -> OutputTable:
        grid = np.linspace(args.r_min, args.r_max, args.points).tolist()
        rows = [[r, e, float(to_db(e))] for r, e in boundary_curve(grid)]
        metadata = self.base_metadata()
        metadata.update({"r_min": args.r_min, "r_max": args.r_max, "points": args.points})
        return OutputTable(
            columns=["spectral_eff", "ebit_over_n", "ebit_over_n_db"],
            rows=rows,
            metadata=metadata,
        )
