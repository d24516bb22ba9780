"""
错误过程模拟测试
"""

import math

import pytest

from ceps_eval.errorsim import (
    curve_data,
    simulate_process,
    two_encoding_experiment,
)
from ceps_eval.exceptions import DomainError
from ceps_eval.types import SimConfig


@pytest.fixture(scope="module")
def acceptance_run():
    return simulate_process(SimConfig(lambda_true=2.0, duration_s=10_000.0, tau_list=(0.05, 0.1, 0.3), seed=0, trials=50))


@pytest.fixture(scope="module")
def neighbor_report():
    return two_encoding_experiment(seed=0)


def test_zero_rate_gives_zero():
    outcome = simulate_process(SimConfig(lambda_true=0.0, duration_s=100.0, tau_list=(0.1, 1.0), trials=5))
    for row in outcome.per_tau:
        assert row.mean_p == 0.0
        assert row.mean_ceps == 0.0
        assert not row.breakdown


def test_ceps_recovers_true_rate(acceptance_run):
    assert [row.tau for row in acceptance_run.per_tau] == [0.05, 0.1, 0.3]
    for row in acceptance_run.per_tau:
        assert row.stderr_ceps > 0
        assert abs(row.mean_ceps - 2.0) <= 3 * row.stderr_ceps, row
        assert not row.breakdown


def test_raw_rate_biased_low(acceptance_run):
    coarse = acceptance_run.per_tau[-1]
    expected_raw = (1 - math.exp(-2.0 * 0.3)) / 0.3
    assert coarse.mean_raw == pytest.approx(expected_raw, abs=0.01)
    assert coarse.mean_raw < 0.8 * 2.0
    for row in acceptance_run.per_tau:
        assert row.mean_raw < row.mean_ceps


def test_errored_fraction_matches_poisson(acceptance_run):
    row = acceptance_run.per_tau[1]
    assert row.mean_p == pytest.approx(1 - math.exp(-0.2), abs=0.002)


def test_longer_duration_shrinks_spread():
    short = simulate_process(SimConfig(lambda_true=2.0, duration_s=100.0, tau_list=(0.1,), seed=1, trials=50))
    long = simulate_process(SimConfig(lambda_true=2.0, duration_s=10_000.0, tau_list=(0.1,), seed=1, trials=50))
    assert long.per_tau[0].stderr_ceps < short.per_tau[0].stderr_ceps / 4


def test_same_seed_same_result():
    config = SimConfig(lambda_true=1.5, duration_s=500.0, tau_list=(0.1, 0.2), seed=42, trials=10)
    assert simulate_process(config).to_dict() == simulate_process(config).to_dict()


def test_different_seed_differs():
    base = SimConfig(lambda_true=1.5, duration_s=500.0, tau_list=(0.1,), seed=1, trials=10)
    other = SimConfig(lambda_true=1.5, duration_s=500.0, tau_list=(0.1,), seed=2, trials=10)
    assert simulate_process(base).per_tau[0].mean_p != simulate_process(other).per_tau[0].mean_p


def test_breakdown_near_saturation():
    outcome = simulate_process(SimConfig(lambda_true=2.0, duration_s=300.0, tau_list=(0.05, 3.0), seed=0, trials=5))
    fine, coarse = outcome.per_tau
    assert not fine.breakdown
    assert coarse.breakdown
    assert coarse.mean_p > 0.9


@pytest.mark.parametrize(
    "config",
    [
        SimConfig(lambda_true=-1.0),
        SimConfig(duration_s=0.0),
        SimConfig(tau_list=(0.0,)),
        SimConfig(tau_list=()),
        SimConfig(duration_s=1.0, tau_list=(2.0,)),
        SimConfig(trials=0),
        SimConfig(seed=-1),
    ],
)
def test_invalid_config(config):
    with pytest.raises(DomainError):
        simulate_process(config)


# ---------------------------------------------------------------- 二编码实验

def test_no_corruption_no_errors():
    report = two_encoding_experiment(seed=0, syllables=200, corruption_rate=0.0)
    assert report.events == 0
    assert report.composed.cer == 0.0
    assert report.jamo.cer == 0.0
    assert report.composed.ceps == 0.0
    assert report.jamo.ceps == 0.0
    assert report.cer_gap == 0.0


def test_views_share_duration(neighbor_report):
    composed, jamo = neighbor_report.composed, neighbor_report.jamo
    assert composed.n == 10_000
    assert 2 * composed.n <= jamo.n <= 3 * composed.n
    assert composed.tau * composed.n == pytest.approx(jamo.tau * jamo.n)


def test_ceps_stable_across_encodings(neighbor_report):
    assert neighbor_report.composed.cer == pytest.approx(1 - math.exp(-0.1), abs=0.01)
    assert neighbor_report.composed.ceps == pytest.approx(0.5, abs=0.05)
    assert neighbor_report.cer_gap >= 0.25
    assert neighbor_report.ceps_gap <= 0.10
    assert neighbor_report.ceps_gap < neighbor_report.cer_gap


def test_random_corruption_inflates_jamo_errors(neighbor_report):
    report = two_encoding_experiment(seed=0, corruption="random")
    assert report.jamo.cer > neighbor_report.jamo.cer
    assert report.ceps_gap > neighbor_report.ceps_gap
    # 整音节替换时两种视图的 CER 接近，CEPS 反而分开
    assert report.cer_gap < 0.25
    assert report.ceps_gap > 0.5


def test_two_encoding_is_deterministic():
    first = two_encoding_experiment(seed=5, syllables=500)
    second = two_encoding_experiment(seed=5, syllables=500)
    assert first.to_dict() == second.to_dict()


def test_two_encoding_rejects_bad_mode():
    with pytest.raises(DomainError):
        two_encoding_experiment(corruption="shuffle")


# ---------------------------------------------------------------- 曲线

def test_curve_three_points():
    points = curve_data(3)
    assert [c.p for c in points] == pytest.approx([0.0, 0.45, 0.9])
    assert points[0].ceps == 0.0
    assert points[-1].ceps == pytest.approx(math.log(10))


def test_curve_half():
    points = curve_data(2, p_max=0.5)
    assert points[-1].ceps == pytest.approx(math.log(2))
    assert points[-1].raw == pytest.approx(0.5)


def test_curve_never_below_raw():
    for point in curve_data(50, p_max=0.99, tau=0.2):
        assert point.ceps >= point.raw


@pytest.mark.parametrize("points, p_max", [(1, 0.9), (3, 1.0), (3, 0.0)])
def test_curve_domain(points, p_max):
    with pytest.raises(DomainError):
        curve_data(points, p_max=p_max)


def test_two_encoding_rejects_negative_seed():
    with pytest.raises(DomainError, match="seed"):
        two_encoding_experiment(seed=-1, syllables=10)
