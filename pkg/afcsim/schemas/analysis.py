from enum import Enum

from pydantic import BaseModel, ConfigDict


class Regime(str, Enum):
    PRE_THRESHOLD = "PreThreshold"
    POST_THRESHOLD = "PostThreshold"


class RateReport(BaseModel):
    """Capacity and output bit-rate for one cycle count"""

    model_config = ConfigDict(frozen=True)

    n: int
    n_star: float  # inf when the feedback channel is noiseless
    capacity: float  # bit/s
    output_rate: float  # bit/s
    regime: Regime


class EfficiencyPoint(BaseModel):
    """A point of the power-bandwidth efficiency plane"""

    model_config = ConfigDict(frozen=True)

    spectral_eff: float  # R / F0, bit/s/Hz
    ebit_over_n: float  # E_bit / N_zeta
    boundary_gap: float  # distance above the Shannon boundary
