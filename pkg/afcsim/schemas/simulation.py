from typing import List, Tuple

from pydantic import BaseModel, ConfigDict


class TrialRecord(BaseModel):
    """One simulated transmission of a single sample"""

    model_config = ConfigDict(frozen=True)

    x_true: float
    x0: float  # prior estimate, reported when no cycle ran
    estimates: Tuple[float, ...]
    sq_errors: Tuple[float, ...]
    clip_flags: Tuple[bool, ...]

    @property
    def final_estimate(self) -> float:
        return self.estimates[-1] if self.estimates else self.x0


class ChunkTotals(BaseModel):
    """Partial sums over a contiguous block of trials.

    Index 0 of the per-cycle lists is the prior (k = 0); indices 1..n are the
    transmission cycles.
    """

    start: int
    stop: int
    sum_err: List[float]
    sum_sq_err: List[float]
    sum_sq_err_sq: List[float]  # sum of (x - x_hat)^4, for standard errors
    clip_counts: List[int]  # per cycle 1..n
    clean_trials: int  # trials with no clip in any cycle
    clean_sum_sq_err: List[float]

    @property
    def trials(self) -> int:
        return self.stop - self.start


class EnsembleStats(BaseModel):
    """Aggregated Monte Carlo results; per-cycle sequences run over k = 0..n"""

    model_config = ConfigDict(frozen=True)

    trials: int
    seed: int
    n: int
    mean_sq_error: Tuple[float, ...]
    sq_error_stderr: Tuple[float, ...]
    mean_error: Tuple[float, ...]
    error_stderr: Tuple[float, ...]
    clip_rate: float
    clip_halfwidth: float  # binomial 1-sigma half-width around clip_rate
    clip_rate_per_cycle: Tuple[float, ...]  # cycles 1..n
    any_clip_fraction: float
    clean_mean_sq_error: Tuple[float, ...]  # trials that never clipped
    generator: str


class ComparisonReport(BaseModel):
    """Verdicts of an ensemble against the theoretical MMSE trajectory"""

    model_config = ConfigDict(frozen=True)

    z_scores: Tuple[float, ...]  # cycles 0..n
    max_abs_z: float
    mse_within_tolerance: Tuple[bool, ...]
    clip_rate: float
    clip_band: Tuple[float, float]
    clip_rate_ok: bool
    bias_ok: bool
    passed: bool
