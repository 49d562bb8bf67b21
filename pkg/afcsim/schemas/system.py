from typing import Optional

from pydantic import BaseModel, ConfigDict


class SystemConfig(BaseModel):
    """Physical and statistical parameters of one feedback communication system.

    Types are coerced on construction; the parameter constraints are checked
    by ``afcsim.services.model.validate`` so every violation is reported
    against the field that caused it.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    x0: float = 0.0  # prior mean of input samples
    sigma0_sq: float  # prior variance of input samples
    sigma_v_sq: float = 0.0  # feedback / modulator-input noise variance
    a0: float = 1.0  # transmitter carrier amplitude
    gamma: float = 1.0  # forward-channel gain, demodulation constants included
    n_zeta: float  # forward-channel noise spectral power density
    f0: float  # forward-channel half-bandwidth, Hz
    f_base: Optional[float] = None  # input-signal baseband limit, Hz
    mu: float  # permissible over-modulation probability
    n_cycles: Optional[int] = None  # cycles per sample; derived from f0 / f_base when absent


class DerivedParams(BaseModel):
    """Constants derived once from a validated SystemConfig"""

    model_config = ConfigDict(frozen=True)

    a: float  # received amplitude A = A0 * gamma
    sigma_zeta_sq: float  # forward noise variance N_zeta * F0
    alpha: float  # saturation factor
    q_sq: float  # SNR at the receiver output
    w_sign: float  # received information power (A / alpha)^2
    n_cycles: int
