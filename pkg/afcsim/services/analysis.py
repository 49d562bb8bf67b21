"""Closed-form analysis: decay regimes, threshold cycles, bit-rates and efficiency.

Bit-rates use the cycle duration 1 / (2 F0), so one cycle carrying
0.5 * log2(1 + Q^2) bits gives a channel rate of F0 * log2(1 + Q^2).
Rates and energies are computed from the exact MMSE recursion; the
closed forms are separate functions used for comparison only.
"""

import math
from typing import Iterable, List, Tuple

from afcsim.core.exceptions import DomainError, PreconditionError
from afcsim.schemas.analysis import EfficiencyPoint, RateReport, Regime
from afcsim.schemas.system import DerivedParams, SystemConfig
from afcsim.services.estimator import mmse_step

LN2 = math.log(2.0)

# marks a feedback channel that never leaves the exponential regime
NEVER = math.inf


def _log2_1p(q_sq: float) -> float:
    return math.log1p(q_sq) / LN2


def threshold_cycles(sigma0_sq: float, sigma_v_sq: float, q_sq: float) -> float:
    """Cycle count at which the exponential MMSE law reaches sigma_v^2.

    Returns ``NEVER`` for a noiseless feedback channel.
    """
    if q_sq <= 0:
        raise DomainError(f"q_sq must be positive, got {q_sq}")
    if sigma_v_sq < 0:
        raise DomainError(f"sigma_v_sq must be nonnegative, got {sigma_v_sq}")
    if sigma_v_sq == 0:
        return NEVER
    if sigma0_sq <= sigma_v_sq:
        raise PreconditionError(
            f"sigma0_sq ({sigma0_sq}) must exceed sigma_v_sq ({sigma_v_sq})"
        )
    return math.log2(sigma0_sq / sigma_v_sq) / _log2_1p(q_sq)


def resolve_threshold(sigma0_sq: float, sigma_v_sq: float, q_sq: float) -> float:
    """threshold_cycles, with 0 when feedback noise dominates from the first cycle"""
    if sigma_v_sq > 0 and sigma0_sq <= sigma_v_sq:
        return 0.0
    return threshold_cycles(sigma0_sq, sigma_v_sq, q_sq)


def regime(n: int, n_star: float) -> Regime:
    # floor keeps the plateau claim conservative for non-integer thresholds
    if math.isinf(n_star) or n <= math.floor(n_star):
        return Regime.PRE_THRESHOLD
    return Regime.POST_THRESHOLD


def mmse_closed_form(
    k: int, sigma0_sq: float, sigma_v_sq: float, q_sq: float, n_star: float
) -> float:
    """Exponential law up to the threshold, hyperbolic law after it"""
    if k <= n_star:
        return sigma0_sq * (1.0 + q_sq) ** (-k)
    return sigma_v_sq / (k - n_star + 1.0)


def info_per_cycle(q_sq: float) -> float:
    """Bits delivered per cycle, 0.5 * log2(1 + Q^2)"""
    if q_sq < 0:
        raise DomainError(f"q_sq must be nonnegative, got {q_sq}")
    return 0.5 * _log2_1p(q_sq)


def channel_capacity(f0: float, q_sq: float) -> float:
    """Forward-channel capacity F0 * log2(1 + Q^2), bit/s"""
    if f0 <= 0:
        raise DomainError(f"f0 must be positive, got {f0}")
    if q_sq < 0:
        raise DomainError(f"q_sq must be nonnegative, got {q_sq}")
    return f0 * _log2_1p(q_sq)


def mutual_information(sigma0_sq: float, p_n: float) -> float:
    """Bits carried by one delivered estimate about its Gaussian sample"""
    if not 0 < p_n <= sigma0_sq:
        raise DomainError(f"p_n must lie in (0, sigma0_sq], got {p_n}")
    return 0.5 * math.log2(sigma0_sq / p_n)


def delivered_bits(
    q_sq: float, sigma0_sq: float, sigma_v_sq: float, n: int
) -> Tuple[float, ...]:
    """Information 0.5 * log2(sigma0^2 / P_k) for k = 0..n, summed cycle by cycle.

    Cycle k adds 0.5 * log2(P_{k-1} / P_k). With a noiseless feedback channel
    every cycle adds exactly 0.5 * log2(1 + Q^2), so the total stays finite
    long after P_k itself underflows.
    """
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    per_cycle = info_per_cycle(q_sq)
    if sigma_v_sq == 0 or q_sq == 0:
        return tuple(k * per_cycle for k in range(n + 1))

    bits = [0.0]
    p = sigma0_sq
    for _ in range(n):
        # P_{k-1} / P_k = (1 + Q^2) (sigma_v^2 + P) / ((1 + Q^2) sigma_v^2 + P)
        shortfall = (sigma_v_sq + p) / ((1.0 + q_sq) * sigma_v_sq + p)
        bits.append(bits[-1] + per_cycle + 0.5 * math.log2(shortfall))
        p = mmse_step(p, q_sq, sigma_v_sq)
    return tuple(bits)


def rate_from_bits(n: int, f0: float, bits: float) -> float:
    """Output bit-rate when one n-cycle transmission delivers ``bits``"""
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if f0 <= 0:
        raise DomainError(f"f0 must be positive, got {f0}")
    return 2.0 * f0 / n * bits


def output_bit_rate(n: int, f0: float, sigma0_sq: float, p_n: float) -> float:
    """Mean bit-rate at the system output, (F0 / n) * log2(sigma0^2 / P_n)"""
    return rate_from_bits(n, f0, mutual_information(sigma0_sq, p_n))


def output_bit_rate_closed_form(
    n: int, n_star: float, capacity: float, f0: float
) -> float:
    """Output bit-rate from the closed-form MMSE laws.

    Equal to the capacity up to the threshold; afterwards
    (n*/n) C + (F0/n) log2(n - n* + 1).
    """
    if n < 1:
        raise DomainError(f"n must be at least 1, got {n}")
    if n <= n_star:
        return capacity
    return n_star / n * capacity + f0 / n * math.log2(n - n_star + 1.0)


def energy_per_bit(w_sign: float, rate: float) -> float:
    if rate <= 0:
        raise DomainError(f"rate must be positive, got {rate}")
    return w_sign / rate


def energy_per_bit_closed_form(
    n: int,
    n_star: float,
    w_sign: float,
    f0: float,
    sigma0_sq: float,
    sigma_v_sq: float,
    q_sq: float,
) -> float:
    if n <= n_star:
        return w_sign / (f0 * _log2_1p(q_sq))
    bits = math.log2(sigma0_sq / sigma_v_sq) + math.log2(n - n_star + 1.0)
    return w_sign * n / (f0 * bits)


def shannon_boundary(spectral_eff: float) -> float:
    """Minimum E_bit / N for a given spectral efficiency, (2^r - 1) / r.

    Tends to ln 2 (-1.59 dB) as the spectral efficiency goes to zero.
    """
    if spectral_eff <= 0:
        raise DomainError(f"spectral_eff must be positive, got {spectral_eff}")
    return math.expm1(spectral_eff * LN2) / spectral_eff


def boundary_curve(spectral_effs: Iterable[float]) -> List[Tuple[float, float]]:
    return [(r, shannon_boundary(r)) for r in spectral_effs]


def efficiency_point(
    derived: DerivedParams, sigma0_sq: float, sigma_v_sq: float, n: int, f0: float
) -> EfficiencyPoint:
    """Locate an n-cycle system on the power-bandwidth efficiency plane"""
    bits = delivered_bits(derived.q_sq, sigma0_sq, sigma_v_sq, n)[-1]
    rate = rate_from_bits(n, f0, bits)
    n_zeta = derived.sigma_zeta_sq / f0
    ebit_over_n = energy_per_bit(derived.w_sign, rate) / n_zeta
    spectral_eff = rate / f0
    return EfficiencyPoint(
        spectral_eff=spectral_eff,
        ebit_over_n=ebit_over_n,
        boundary_gap=ebit_over_n - shannon_boundary(spectral_eff),
    )


def rate_report(config: SystemConfig, derived: DerivedParams, n: int) -> RateReport:
    n_star = resolve_threshold(config.sigma0_sq, config.sigma_v_sq, derived.q_sq)
    bits = delivered_bits(derived.q_sq, config.sigma0_sq, config.sigma_v_sq, n)[-1]
    return RateReport(
        n=n,
        n_star=n_star,
        capacity=channel_capacity(config.f0, derived.q_sq),
        output_rate=rate_from_bits(n, config.f0, bits),
        regime=regime(n, n_star),
    )


def optimal_cycles(n_star: float) -> int:
    """Largest cycle count that still runs at capacity"""
    if math.isinf(n_star):
        raise DomainError("No finite optimum: the feedback channel is noiseless")
    return max(1, math.floor(n_star))
