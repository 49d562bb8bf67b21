import math

import numpy as np
import pytest

from afcsim.core.exceptions import DomainError, PreconditionError
from afcsim.schemas.analysis import Regime
from afcsim.services.analysis import (
    NEVER,
    boundary_curve,
    channel_capacity,
    delivered_bits,
    efficiency_point,
    energy_per_bit,
    energy_per_bit_closed_form,
    info_per_cycle,
    mmse_closed_form,
    mutual_information,
    optimal_cycles,
    output_bit_rate,
    output_bit_rate_closed_form,
    rate_from_bits,
    rate_report,
    regime,
    resolve_threshold,
    shannon_boundary,
    threshold_cycles,
)
from afcsim.services.estimator import mmse_trajectory
from afcsim.services.model import validate

Q_GRID = [0.1, 0.5, 1.0, 3.0, 10.0, 100.0]


def test_threshold_powers_of_two():
    assert threshold_cycles(1.0, 2.0**-10, 1.0) == pytest.approx(10.0, rel=1e-12)


def test_threshold_reference():
    assert threshold_cycles(1.0, 1e-4, 3.0) == pytest.approx(6.6439, abs=1e-4)


def test_threshold_noiseless_feedback_is_never():
    assert threshold_cycles(1.0, 0.0, 3.0) is NEVER


def test_threshold_precondition():
    with pytest.raises(PreconditionError):
        threshold_cycles(1e-4, 1e-3, 3.0)
    assert resolve_threshold(1e-4, 1e-3, 3.0) == 0.0


def test_threshold_domain():
    with pytest.raises(DomainError):
        threshold_cycles(1.0, 1e-4, 0.0)


def test_regime_classification():
    assert regime(6, 6.6439) == Regime.PRE_THRESHOLD
    assert regime(7, 6.6439) == Regime.POST_THRESHOLD
    assert regime(10_000, NEVER) == Regime.PRE_THRESHOLD
    assert Regime.POST_THRESHOLD.value == "PostThreshold"


def test_closed_form_continuity_at_threshold():
    sigma_v_sq = 2.0**-10
    n_star = threshold_cycles(1.0, sigma_v_sq, 1.0)
    assert mmse_closed_form(10, 1.0, sigma_v_sq, 1.0, n_star) == pytest.approx(sigma_v_sq)
    assert sigma_v_sq / (10 - n_star + 1.0) == pytest.approx(sigma_v_sq)


def test_closed_form_values():
    assert mmse_closed_form(3, 1.0, 2.0**-10, 1.0, 10.0) == 0.125
    n_star = threshold_cycles(1.0, 1e-4, 3.0)
    assert mmse_closed_form(10, 1.0, 1e-4, 3.0, n_star) == pytest.approx(2.29e-5, abs=1e-7)


@pytest.mark.parametrize("q_sq", Q_GRID)
def test_exponential_law_before_threshold(make_derived, q_sq):
    sigma_v_sq = 1e-8
    n_star = threshold_cycles(1.0, sigma_v_sq, q_sq)
    p = mmse_trajectory(make_derived(q_sq), 1.0, sigma_v_sq, math.floor(n_star)).p
    for k in range(math.floor(n_star / 2) + 1):
        closed = mmse_closed_form(k, 1.0, sigma_v_sq, q_sq, n_star)
        assert closed == pytest.approx(p[k], rel=0.01)


def test_hyperbolic_law_at_high_receiver_snr(make_derived):
    # the hyperbolic law is the large-Q^2 limit of the exact recursion
    q_sq, sigma_v_sq = 100.0, 1e-4
    n_star = threshold_cycles(1.0, sigma_v_sq, q_sq)
    first, last = math.ceil(n_star + 3), math.floor(n_star + 30)
    p = mmse_trajectory(make_derived(q_sq), 1.0, sigma_v_sq, last).p
    for k in range(first, last + 1):
        closed = mmse_closed_form(k, 1.0, sigma_v_sq, q_sq, n_star)
        assert abs(closed - p[k]) / p[k] <= 0.15


def test_info_per_cycle():
    assert info_per_cycle(0.0) == 0.0
    assert info_per_cycle(1.0) == pytest.approx(0.5)
    assert info_per_cycle(3.0) == pytest.approx(1.0)


def test_channel_capacity():
    assert channel_capacity(1000.0, 1.0) == pytest.approx(1000.0)
    assert channel_capacity(1000.0, 0.0) == 0.0


def test_mutual_information():
    assert mutual_information(2.0, 2.0) == 0.0
    assert mutual_information(1.0, 0.25) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        mutual_information(1.0, 0.0)
    with pytest.raises(DomainError):
        mutual_information(1.0, 1.5)


def test_output_rate_without_information():
    assert output_bit_rate(4, 1.0, 1.0, 1.0) == 0.0


@pytest.mark.parametrize("q_sq", Q_GRID)
def test_plateau_with_noiseless_feedback(make_derived, q_sq):
    capacity = channel_capacity(1.0, q_sq)
    p = mmse_trajectory(make_derived(q_sq), 1.0, 0.0, 20).p
    for n in range(1, 21):
        assert output_bit_rate(n, 1.0, 1.0, p[n]) == pytest.approx(capacity, abs=1e-9)


def test_post_threshold_rate_example():
    sigma_v_sq = 2.0**-10
    rate = output_bit_rate(17, 1.0, 1.0, sigma_v_sq / 8.0)
    assert rate == pytest.approx(13.0 / 17.0, rel=1e-12)
    assert output_bit_rate_closed_form(17, 10.0, 1.0, 1.0) == pytest.approx(13.0 / 17.0, rel=1e-12)


def test_closed_form_rate_continuous_at_threshold():
    capacity = channel_capacity(2.0, 3.0)
    assert output_bit_rate_closed_form(6, 6.5, capacity, 2.0) == capacity
    just_below = 10.0 - 1e-12
    assert output_bit_rate_closed_form(10, just_below, capacity, 2.0) == pytest.approx(capacity, rel=1e-9)


@pytest.mark.parametrize("q_sq", [0.5, 3.0, 30.0])
def test_exact_rate_decreases_and_stays_below_capacity(make_derived, q_sq):
    sigma_v_sq = 1e-4
    capacity = channel_capacity(1.0, q_sq)
    p = mmse_trajectory(make_derived(q_sq), 1.0, sigma_v_sq, 60).p
    rates = [output_bit_rate(n, 1.0, 1.0, p[n]) for n in range(1, 61)]
    assert all(r <= capacity * (1.0 + 1e-12) for r in rates)
    assert all(b < a for a, b in zip(rates, rates[1:]))


def test_noisier_forward_channel(make_config):
    """More forward noise lowers the plateau and delays the threshold"""
    quiet = validate(make_config(10.0, sigma_v_sq=1e-4))
    noisy = validate(make_config(10.0, sigma_v_sq=1e-4).model_copy(update={"n_zeta": 4.0}))

    assert noisy.q_sq == pytest.approx(2.5)
    assert channel_capacity(1.0, noisy.q_sq) < channel_capacity(1.0, quiet.q_sq)
    assert threshold_cycles(1.0, 1e-4, noisy.q_sq) > threshold_cycles(1.0, 1e-4, quiet.q_sq)


def test_energy_per_bit():
    assert energy_per_bit(1.0, 1.0) == 1.0
    with pytest.raises(DomainError):
        energy_per_bit(1.0, 0.0)


def test_energy_closed_form_matches_rate_closed_form():
    sigma_v_sq, q_sq, f0, w_sign = 1e-4, 3.0, 2.0, 6.0
    n_star = threshold_cycles(1.0, sigma_v_sq, q_sq)
    capacity = channel_capacity(f0, q_sq)
    for n in range(1, 30):
        rate = output_bit_rate_closed_form(n, n_star, capacity, f0)
        expected = energy_per_bit(w_sign, rate)
        actual = energy_per_bit_closed_form(n, n_star, w_sign, f0, 1.0, sigma_v_sq, q_sq)
        assert actual == pytest.approx(expected, rel=1e-12)


def test_shannon_boundary():
    assert shannon_boundary(1.0) == pytest.approx(1.0)
    assert shannon_boundary(2.0) == pytest.approx(1.5)
    assert shannon_boundary(1e-6) == pytest.approx(math.log(2.0), abs=1e-6)
    with pytest.raises(DomainError):
        shannon_boundary(0.0)


def test_boundary_curve_increasing():
    curve = boundary_curve(np.linspace(0.1, 8.0, 50).tolist())
    values = [e for _, e in curve]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_shannon_boundary_convex():
    values = np.array([e for _, e in boundary_curve(np.linspace(0.05, 12.0, 240).tolist())])
    assert np.all(np.diff(values, 2) > 0)

    rng = np.random.default_rng(23)
    for _ in range(1000):
        r1, r2 = sorted(float(r) for r in rng.uniform(0.01, 12.0, size=2))
        t = float(rng.uniform())
        chord = t * shannon_boundary(r1) + (1.0 - t) * shannon_boundary(r2)
        assert shannon_boundary(t * r1 + (1.0 - t) * r2) <= chord * (1.0 + 1e-12)


@pytest.mark.parametrize("q_sq", [0.1, 0.5, 1.0, 3.0, 10.0, 100.0])
def test_ideal_system_on_boundary(make_derived, q_sq):
    derived = make_derived(q_sq)
    for n in range(1, 51):
        point = efficiency_point(derived, 1.0, 0.0, n, 1.0)
        assert abs(point.boundary_gap) <= 1e-12 * point.ebit_over_n
        assert point.spectral_eff == pytest.approx(math.log2(1.0 + q_sq))


def test_unit_snr_efficiency(make_derived):
    point = efficiency_point(make_derived(1.0), 1.0, 0.0, 3, 1.0)
    assert point.spectral_eff == pytest.approx(1.0)
    assert point.ebit_over_n == pytest.approx(1.0)


def test_gap_vanishes_with_feedback_noise(make_derived):
    derived = make_derived(3.0)
    gaps = [
        efficiency_point(derived, 1.0, sigma_v_sq, 3, 1.0).boundary_gap
        for sigma_v_sq in (1e-4, 1e-8, 1e-12)
    ]
    assert all(gap >= 0.0 for gap in gaps)
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-9


def test_gap_grows_after_threshold(make_derived):
    derived = make_derived(3.0)
    n_star = threshold_cycles(1.0, 1e-4, 3.0)
    at_threshold = efficiency_point(derived, 1.0, 1e-4, math.floor(n_star), 1.0)
    doubled = efficiency_point(derived, 1.0, 1e-4, 2 * math.floor(n_star), 1.0)
    assert doubled.boundary_gap > at_threshold.boundary_gap > 0.0

    gaps = [
        efficiency_point(derived, 1.0, 1e-4, n, 1.0).boundary_gap
        for n in range(math.ceil(n_star), 40)
    ]
    assert all(b >= a for a, b in zip(gaps, gaps[1:]))


def test_rate_report(reference_config):
    derived = validate(reference_config)
    report = rate_report(reference_config, derived, 12)

    assert report.n_star == pytest.approx(6.6439, abs=1e-4)
    assert report.capacity == pytest.approx(2.0)
    assert 0.0 < report.output_rate < report.capacity
    assert report.regime == Regime.POST_THRESHOLD


def test_optimal_cycles():
    assert optimal_cycles(6.6439) == 6
    assert optimal_cycles(0.4) == 1
    with pytest.raises(DomainError):
        optimal_cycles(NEVER)


def test_delivered_bits_track_mutual_information(make_derived):
    p = mmse_trajectory(make_derived(3.0), 1.0, 1e-4, 40).p
    bits = delivered_bits(3.0, 1.0, 1e-4, 40)

    assert len(bits) == 41
    for p_k, bits_k in zip(p, bits):
        assert bits_k == pytest.approx(mutual_information(1.0, p_k), rel=1e-12, abs=1e-15)


def test_rates_survive_mmse_underflow(make_derived):
    derived = make_derived(1500.0, n_cycles=120)
    assert mmse_trajectory(derived, 1.0, 0.0, 120).p[-1] == 0.0

    bits = delivered_bits(1500.0, 1.0, 0.0, 120)
    capacity = channel_capacity(1.0, 1500.0)
    assert rate_from_bits(120, 1.0, bits[-1]) == pytest.approx(capacity, rel=1e-12)

    point = efficiency_point(derived, 1.0, 0.0, 120, 1.0)
    assert abs(point.boundary_gap) <= 1e-12 * point.ebit_over_n


def test_rate_from_bits_domain():
    assert rate_from_bits(4, 2.0, 3.0) == 3.0
    with pytest.raises(DomainError):
        rate_from_bits(0, 1.0, 1.0)
    with pytest.raises(DomainError):
        rate_from_bits(1, 0.0, 1.0)
