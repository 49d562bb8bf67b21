"""Base-station estimator: Kalman-type update and exact MMSE recursion"""

import math
from typing import Tuple

import numpy as np

from afcsim.core.exceptions import DomainError
from afcsim.schemas.state import EstimatorState, MmseTrajectory
from afcsim.schemas.system import DerivedParams, SystemConfig
from afcsim.services.modulator import adapt


def mmse_step(p_prev: float, q_sq: float, sigma_v_sq: float) -> float:
    """MMSE after one more cycle, given the MMSE before it.

    P_k = P_{k-1} ((1+Q^2) sigma_v^2 + P_{k-1}) / ((1+Q^2)(sigma_v^2 + P_{k-1}))
    """
    if p_prev <= 0:
        raise DomainError(f"p_prev must be positive, got {p_prev}")
    if q_sq < 0 or sigma_v_sq < 0:
        raise DomainError("q_sq and sigma_v_sq must be nonnegative")
    if q_sq == 0:
        return p_prev
    growth = 1.0 + q_sq
    return p_prev * (growth * sigma_v_sq + p_prev) / (growth * (sigma_v_sq + p_prev))


def mmse_step_innovation_form(
    p_prev: float, m_k: float, a: float, sigma_v_sq: float, sigma_zeta_sq: float
) -> float:
    """Same recursion written as the prior MMSE minus the innovation gain"""
    if p_prev <= 0:
        raise DomainError(f"p_prev must be positive, got {p_prev}")
    signal = (a * m_k) ** 2
    return p_prev - signal * p_prev**2 / (sigma_zeta_sq + signal * (sigma_v_sq + p_prev))


def gain(
    m_k: float, a: float, p_prev: float, sigma_v_sq: float, sigma_zeta_sq: float
) -> float:
    """Covariance-ratio estimator gain L_k.

    Equals (A M_k)^-1 (1 - P_k / P_{k-1}); for A = 1 this is the textbook
    M_k^-1 (1 - P_k / P_{k-1}).
    """
    if m_k <= 0 or a <= 0 or p_prev <= 0 or sigma_zeta_sq <= 0:
        raise DomainError("m_k, a, p_prev and sigma_zeta_sq must be positive")
    if sigma_v_sq < 0:
        raise DomainError(f"sigma_v_sq must be nonnegative, got {sigma_v_sq}")
    # a m_k sqrt(sigma_v^2 + P) stays bounded even when m_k^2 alone would overflow
    spread = a * m_k * math.sqrt(sigma_v_sq + p_prev)
    return a * m_k * p_prev / (sigma_zeta_sq + spread**2)


def update(x_hat_prev: float, l_k: float, y_tilde: float) -> float:
    # y_tilde has zero conditional mean because B_k = x_hat_{k-1}
    return x_hat_prev + l_k * y_tilde


def mmse_trajectory(
    derived: DerivedParams, sigma0_sq: float, sigma_v_sq: float, n: int
) -> MmseTrajectory:
    """Theoretical MMSE P_0..P_n starting from the prior variance"""
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    p = [sigma0_sq]
    for _ in range(n):
        # a noiseless feedback channel can drive P_k below the float range
        p.append(mmse_step(p[-1], derived.q_sq, sigma_v_sq) if p[-1] > 0 else 0.0)
    return MmseTrajectory(p=tuple(p))


def gain_schedule(
    derived: DerivedParams, sigma0_sq: float, sigma_v_sq: float, n: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Open-loop modulator gains M_1..M_n and estimator gains L_1..L_n.

    Both depend only on the theoretical MMSE, so transmitter and base station
    compute identical schedules without exchanging them.
    """
    trajectory = mmse_trajectory(derived, sigma0_sq, sigma_v_sq, n)
    m = np.empty(n)
    l = np.empty(n)
    for k in range(1, n + 1):
        p_prev = trajectory.p[k - 1]
        m[k - 1] = adapt(0.0, p_prev, sigma_v_sq, derived.alpha, cycle=k).m_k
        l[k - 1] = gain(m[k - 1], derived.a, p_prev, sigma_v_sq, derived.sigma_zeta_sq)
    return m, l


def initial_state(config: SystemConfig) -> EstimatorState:
    return EstimatorState(x_hat=config.x0, p_k=config.sigma0_sq, cycle=0)


def step(
    state: EstimatorState, y_tilde: float, derived: DerivedParams, sigma_v_sq: float
) -> EstimatorState:
    """Run one receiver cycle: gain, estimate update and MMSE update"""
    m_k = adapt(state.x_hat, state.p_k, sigma_v_sq, derived.alpha, state.cycle + 1).m_k
    l_k = gain(m_k, derived.a, state.p_k, sigma_v_sq, derived.sigma_zeta_sq)
    return EstimatorState(
        x_hat=update(state.x_hat, l_k, y_tilde),
        p_k=mmse_step(state.p_k, derived.q_sq, sigma_v_sq),
        cycle=state.cycle + 1,
    )
