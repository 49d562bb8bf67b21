"""Adaptive saturating pulse-amplitude modulator.

The modulator subtracts the position ``B_k`` from the held sample, scales
the difference by the gain ``M_k`` and saturates at +/-1. Both parameters
are recomputed every cycle from the receiver's estimate and its MMSE so the
input stays inside the linear range with probability ``1 - mu``.
"""

import math
from typing import Tuple

import numpy as np
from scipy import special

from afcsim.core.exceptions import DegenerateStateError, DomainError
from afcsim.schemas.state import Emission, ModulatorState


def saturation_factor(mu: float) -> float:
    """Return alpha with Pr(|Z| > alpha) = mu for a standard Gaussian Z.

    This is the (1 - mu/2)-quantile of the standard normal. It is evaluated
    through the lower tail, ``-ndtri(mu/2)``, which keeps full precision
    for small ``mu`` where ``1 - mu/2`` would round.
    """
    if not 0.0 < mu < 0.5:
        raise DomainError(f"mu must lie in (0, 0.5), got {mu}")
    return float(-special.ndtri(mu / 2.0))


def adapt(
    x_hat_prev: float,
    p_prev: float,
    sigma_v_sq: float,
    alpha: float,
    cycle: int = 1,
) -> ModulatorState:
    """Optimal modulator adjustment for the next cycle.

    The position follows the current estimate and the gain normalizes the
    error-signal spread ``sqrt(sigma_v_sq + p_prev)`` to ``1 / alpha``.
    """
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if sigma_v_sq < 0:
        raise DomainError(f"sigma_v_sq must be nonnegative, got {sigma_v_sq}")
    if p_prev < 0:
        raise DomainError(f"p_prev must be nonnegative, got {p_prev}")
    spread = sigma_v_sq + p_prev
    if spread <= 0:
        raise DegenerateStateError(
            "Modulator gain diverges: p_prev and sigma_v_sq are both zero"
        )
    m_k = 1.0 / (alpha * math.sqrt(spread))
    return ModulatorState(b_k=x_hat_prev, m_k=m_k, cycle=cycle)


def emit(e_k: float, m_k: float) -> Emission:
    """Pass the error signal through the saturating transfer characteristic"""
    if m_k <= 0:
        raise DomainError(f"m_k must be positive, got {m_k}")
    scaled = m_k * e_k
    if abs(scaled) <= 1.0:
        return Emission(value=scaled, clipped=False)
    return Emission(value=math.copysign(1.0, e_k), clipped=True)


def emit_array(e: np.ndarray, m_k: float) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized ``emit`` over a batch of error signals"""
    scaled = m_k * e
    clipped = np.abs(scaled) > 1.0
    return np.clip(scaled, -1.0, 1.0), clipped


def overmod_probability(m_k: float, sigma_e_sq: float) -> float:
    """Pr(m_k * |e_k| > 1) for zero-mean Gaussian e_k with variance sigma_e_sq"""
    if m_k <= 0 or sigma_e_sq <= 0:
        raise DomainError(
            f"m_k and sigma_e_sq must be positive, got {m_k} and {sigma_e_sq}"
        )
    threshold = 1.0 / (m_k * math.sqrt(sigma_e_sq))
    return float(2.0 * special.ndtr(-threshold))


def first_overmod_probability(mu: float, k: int) -> float:
    """Probability that the first over-modulation happens at cycle k.

    Cycles are independent Bernoulli(mu) events under statistical fitting,
    giving (1 - mu)^(k-1) * mu = mu + O((k - 1) mu^2).
    """
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    if k < 1:
        raise DomainError(f"cycle index must be >= 1, got {k}")
    return math.exp((k - 1) * math.log1p(-mu)) * mu


def any_overmod_probability(mu: float, n: int) -> float:
    """Probability that at least one of n cycles over-modulates"""
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    if n < 0:
        raise DomainError(f"cycle count must be nonnegative, got {n}")
    return -math.expm1(n * math.log1p(-mu))
