"""System configuration validation and derived constants"""

import logging
import math
import sys
from typing import Any, Mapping

import numpy as np
from pydantic import ValidationError

from afcsim.core.exceptions import ConfigError, ConfigValidationError, DomainError
from afcsim.schemas.system import DerivedParams, SystemConfig
from afcsim.services.modulator import saturation_factor

logger = logging.getLogger(__name__)

# f0 / f_base must be this close to an integer cycle count
CYCLE_RATIO_TOLERANCE = 1e-9

# smallest normal double; the MMSE recursion and modulator gain need P_n above it
MMSE_FLOOR = sys.float_info.min


def load_config(raw: Mapping[str, Any]) -> SystemConfig:
    """Build a SystemConfig from raw key/value pairs, naming the offending key on failure"""
    unknown = sorted(set(raw) - set(SystemConfig.model_fields))
    if unknown:
        raise ConfigError(unknown[0], "unknown config key")
    try:
        return SystemConfig(**raw)
    except ValidationError as e:
        error = e.errors()[0]
        key = str(error["loc"][0]) if error["loc"] else "config"
        raise ConfigError(key, error["msg"]) from e


def _resolve_cycles(config: SystemConfig) -> int:
    n_cycles = config.n_cycles
    if config.f_base is not None:
        if not (math.isfinite(config.f_base) and config.f_base > 0):
            raise ConfigValidationError("f_base", f"must be positive, got {config.f_base}")
        ratio = config.f0 / config.f_base
        n_from_bands = round(ratio)
        if abs(ratio - n_from_bands) > CYCLE_RATIO_TOLERANCE:
            raise ConfigValidationError(
                "f_base", f"f0 / f_base = {ratio!r} is not an integer cycle count"
            )
        if n_cycles is not None and n_cycles != n_from_bands:
            raise ConfigValidationError(
                "n_cycles",
                f"{n_cycles} disagrees with f0 / f_base = {n_from_bands}",
            )
        n_cycles = n_from_bands
    if n_cycles is None:
        raise ConfigValidationError("n_cycles", "required when f_base is not given")
    if n_cycles < 0:
        raise ConfigValidationError("n_cycles", f"must be nonnegative, got {n_cycles}")
    return n_cycles


def _check_mmse_floor(config: SystemConfig, q_sq: float, n_cycles: int) -> None:
    """Reject cycle counts whose MMSE would fall below the float range.

    P_n is bounded below by both sigma0^2 (1 + Q^2)^-n and the hyperbolic
    bound 1 / (1/sigma0^2 + n Q^2 / ((1 + Q^2) sigma_v^2)).
    """
    if n_cycles == 0:
        return
    log_floor = math.log(MMSE_FLOOR)
    log_decay = math.log1p(q_sq)
    if math.log(config.sigma0_sq) - n_cycles * log_decay >= log_floor:
        return
    if config.sigma_v_sq > 0:
        inverse = 1.0 / config.sigma0_sq + n_cycles * q_sq / ((1.0 + q_sq) * config.sigma_v_sq)
        if 1.0 / inverse >= MMSE_FLOOR:
            return
    message = f"{n_cycles} cycles drive the MMSE below the float range"
    if config.sigma_v_sq == 0:
        limit = math.floor((math.log(config.sigma0_sq) - log_floor) / log_decay)
        message += f" (at most {limit} with noiseless feedback)"
    raise ConfigValidationError("n_cycles", message)


def validate(config: SystemConfig) -> DerivedParams:
    """Check every parameter constraint and compute the derived constants"""
    for field in ("x0", "sigma0_sq", "sigma_v_sq", "a0", "gamma", "n_zeta", "f0", "mu"):
        value = getattr(config, field)
        if not math.isfinite(value):
            raise ConfigValidationError(field, f"must be finite, got {value}")

    if config.sigma0_sq <= 0:
        raise ConfigValidationError("sigma0_sq", f"must be positive, got {config.sigma0_sq}")
    if config.sigma_v_sq < 0:
        raise ConfigValidationError("sigma_v_sq", f"must be nonnegative, got {config.sigma_v_sq}")
    if config.n_zeta <= 0:
        raise ConfigValidationError("n_zeta", f"must be positive, got {config.n_zeta}")
    if config.f0 <= 0:
        raise ConfigValidationError("f0", f"must be positive, got {config.f0}")
    if not 0.0 < config.mu < 0.5:
        raise ConfigValidationError("mu", f"must lie in (0, 0.5), got {config.mu}")
    a = config.a0 * config.gamma
    if a <= 0:
        raise ConfigValidationError("gamma", f"a0 * gamma must be positive, got {a}")

    n_cycles = _resolve_cycles(config)

    sigma_zeta_sq = config.n_zeta * config.f0
    if sigma_zeta_sq <= 0:
        raise ConfigValidationError(
            "n_zeta", "forward noise variance n_zeta * f0 underflows to zero"
        )

    alpha = saturation_factor(config.mu)
    w_sign = (a / alpha) ** 2
    q_sq = w_sign / sigma_zeta_sq
    if q_sq > 0:
        _check_mmse_floor(config, q_sq, n_cycles)

    derived = DerivedParams(
        a=a,
        sigma_zeta_sq=sigma_zeta_sq,
        alpha=alpha,
        q_sq=q_sq,
        w_sign=w_sign,
        n_cycles=n_cycles,
    )
    logger.debug(
        "Validated config: alpha=%.6g q_sq=%.6g n_cycles=%d", alpha, q_sq, n_cycles
    )
    return derived


def snr_impulse(config: SystemConfig) -> float:
    """Input SNR at the modulator, sigma0^2 / sigma_v^2"""
    if config.sigma_v_sq == 0:
        return math.inf
    return config.sigma0_sq / config.sigma_v_sq


def threshold_condition_holds(
    config: SystemConfig, derived: DerivedParams, margin: float = 10.0
) -> bool:
    """Whether the input SNR dominates 1 + Q^2 by ``margin``.

    Only then does the MMSE show a clean exponential phase followed by a
    hyperbolic one.
    """
    return snr_impulse(config) >= margin * (1.0 + derived.q_sq)


def cycle_duration(f0: float) -> float:
    """Duration of one transmission cycle, 1 / (2 F0)"""
    if f0 <= 0:
        raise DomainError(f"f0 must be positive, got {f0}")
    return 1.0 / (2.0 * f0)


def sampling_period(f_base: float) -> float:
    """Sampling period of the input signal, 1 / (2 F)"""
    if f_base <= 0:
        raise DomainError(f"f_base must be positive, got {f_base}")
    return 1.0 / (2.0 * f_base)


def to_db(value):
    return 10.0 * np.log10(value)


def from_db(value_db):
    return 10.0 ** (np.asarray(value_db) / 10.0)
