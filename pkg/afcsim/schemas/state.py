from typing import Tuple

from pydantic import BaseModel, ConfigDict


class ModulatorState(BaseModel):
    """Per-cycle modulator adjustment sent over the feedback channel"""

    model_config = ConfigDict(frozen=True)

    b_k: float  # transfer-function position
    m_k: float  # gain
    cycle: int = 1


class Emission(BaseModel):
    """Normalized modulator output for one cycle"""

    model_config = ConfigDict(frozen=True)

    value: float
    clipped: bool


class EstimatorState(BaseModel):
    """Base-station estimate and its theoretical MMSE after ``cycle`` cycles"""

    model_config = ConfigDict(frozen=True)

    x_hat: float
    p_k: float
    cycle: int = 0


class MmseTrajectory(BaseModel):
    """Theoretical MMSE P_k for k = 0..n"""

    model_config = ConfigDict(frozen=True)

    p: Tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.p) - 1
