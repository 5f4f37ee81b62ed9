import math

import numpy as np
import pytest

from specagg import SensingParams, decision_probability, sense
from specagg.sensing import binomial


def test_sensing_params_validation():
    with pytest.raises(ValueError, match="p_fa"):
        SensingParams(p_fa=1.5, p_md=0.0)
    with pytest.raises(ValueError, match="p_md"):
        SensingParams(p_fa=0.0, p_md=-0.1)


def test_sense_no_false_alarms_declares_all_idle():
    rng = np.random.default_rng(0)
    decisions = sense(np.zeros(64, dtype=bool), SensingParams(p_fa=0.0, p_md=0.3), rng)
    assert decisions.all()


def test_sense_perfect_detection_declares_all_busy():
    rng = np.random.default_rng(0)
    decisions = sense(np.ones(64, dtype=bool), SensingParams(p_fa=0.3, p_md=0.0), rng)
    assert not decisions.any()


def test_sense_pair_of_idle_bands_both_declared_idle_rate():
    # 10^6 independent two-band slots; both declared idle with prob (1-p_fa)^2
    rng = np.random.default_rng(123)
    decisions = sense(np.zeros(2_000_000, dtype=bool), SensingParams(0.05, 0.0), rng)
    frac = decisions.reshape(-1, 2).all(axis=1).mean()
    assert abs(frac - 0.9025) <= 0.001


def test_sense_marginals_at_a_million_draws():
    rng = np.random.default_rng(7)
    n = 1_000_000
    params = SensingParams(p_fa=0.1, p_md=0.2)
    busy_idle_rate = sense(np.ones(n, dtype=bool), params, rng).mean()
    idle_idle_rate = sense(np.zeros(n, dtype=bool), params, rng).mean()
    se_md = math.sqrt(0.2 * 0.8 / n)
    se_fa = math.sqrt(0.9 * 0.1 / n)
    assert abs(busy_idle_rate - params.p_md) <= 3 * se_md
    assert abs(idle_idle_rate - (1 - params.p_fa)) <= 3 * se_fa


def test_sense_applies_one_uniform_per_band_with_two_thresholds():
    # the simulator pre-draws the same rule; pin the layout sense() uses
    params = SensingParams(p_fa=0.2, p_md=0.3)
    bands = np.array([True, False, True, True, False, False, True])
    u = np.random.default_rng(9).random(len(bands))
    expected = np.where(bands, u < params.p_md, u < 1.0 - params.p_fa)
    got = sense(bands, params, np.random.default_rng(9))
    assert (got == expected).all()


def test_sense_is_deterministic_under_a_seed():
    params = SensingParams(0.2, 0.3)
    bands = np.array([True, False, True, True, False])
    a = sense(bands, params, np.random.default_rng(42))
    b = sense(bands, params, np.random.default_rng(42))
    assert (a == b).all()


def test_decision_probability_examples():
    assert decision_probability(1, 1, True, SensingParams(0.05, 0.0), 1) == pytest.approx(0.95)
    assert decision_probability(2, 1, True, SensingParams(0.05, 0.0), 2) == pytest.approx(0.095)
    assert decision_probability(0, 0, True, SensingParams(0.0, 0.05), 2) == pytest.approx(0.9025)


def test_decision_probability_sums_to_detection_factor():
    params = SensingParams(p_fa=0.17, p_md=0.23)
    for m in range(1, 9):
        for eta in range(0, m + 1):
            total = sum(
                decision_probability(eta, n, True, params, m) for n in range(eta + 1)
            )
            assert abs(total - (1 - params.p_md) ** (m - eta)) <= 1e-12


def test_decision_probability_true_false_branches_partition():
    params = SensingParams(p_fa=0.3, p_md=0.4)
    for m in range(1, 7):
        for eta in range(0, m + 1):
            total = sum(
                decision_probability(eta, n, detected, params, m)
                for n in range(eta + 1)
                for detected in (True, False)
            )
            assert abs(total - 1.0) <= 1e-12


def test_decision_probability_count_violations():
    params = SensingParams(0.1, 0.1)
    with pytest.raises(ValueError):
        decision_probability(2, 3, True, params, 4)  # n > eta
    with pytest.raises(ValueError):
        decision_probability(5, 1, True, params, 4)  # eta > m
    with pytest.raises(ValueError):
        decision_probability(2, -1, True, params, 4)


def test_binomial_matches_exact_coefficients():
    for n in range(0, 31):
        for k in range(-1, n + 2):
            expected = math.comb(n, k) if 0 <= k <= n else 0
            assert binomial(n, k) == pytest.approx(expected, rel=1e-12)
    assert binomial(200, 100) == pytest.approx(math.comb(200, 100), rel=1e-10)
