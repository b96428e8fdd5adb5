# tests/test_latency.py
from dataclasses import replace

import numpy as np
import pytest

from chaos_sbox.core.errors import ConfigurationError
from chaos_sbox.core.types import DyadicSet, GenerationParams, LatencyConfig
from chaos_sbox.dynamics.fixedpoint import parse_beta, parse_fraction
from chaos_sbox.latency.model import (
    baseline_rows,
    cycles_to_time,
    expected_acceptances,
    expected_cycles,
)
from chaos_sbox.latency.simulation import (
    measure_real_generator,
    nearest_rank,
    perturbed_seed,
    simulate,
)

PARAMS = GenerationParams(
    beta=parse_beta("phi256", 64),
    seed_x0=parse_fraction("0.3", 64),
    gate=DyadicSet.from_indices(3, [5]),
)


# ----------------------------------------------------------
# Analytic model
# ----------------------------------------------------------

def test_expected_acceptances():
    assert expected_acceptances(8) == pytest.approx(1567.83, abs=0.01)
    assert 1566.8 <= expected_acceptances(8) <= 1568.8
    assert expected_acceptances(1) == 3.0
    assert expected_acceptances(0) == 1.0


def test_expected_cycles_match_published_predictions():
    k3 = expected_cycles(LatencyConfig(rank_k=3), 8)
    k4 = expected_cycles(LatencyConfig(rank_k=4), 8)
    assert cycles_to_time(k3, 200e6) == pytest.approx(70.53, rel=0.005)
    assert cycles_to_time(k4, 200e6) == pytest.approx(133.22, rel=0.005)
    assert k3 == pytest.approx(14110, rel=0.001)


def test_expected_cycles_without_gate_is_the_harmonic_sum():
    config = LatencyConfig(rank_k=0, c_acc=0)
    assert expected_cycles(config, 8) == pytest.approx(expected_acceptances(8))


def test_cycles_to_time():
    assert cycles_to_time(13586, 200e6) == pytest.approx(67.93)
    assert cycles_to_time(200, 200e6) == pytest.approx(1.0)
    assert cycles_to_time(0, 200e6) == 0.0
    with pytest.raises(ConfigurationError):
        cycles_to_time(1, 0)


def test_baseline_rows():
    rows = {row.name.split(" ")[0]: row for row in baseline_rows()}
    assert rows["GF(2^8)"].cycles == 256
    assert rows["GF(2^8)"].microseconds == pytest.approx(1.28)
    assert rows["ROM"].cycles == 64
    assert rows["ROM"].microseconds == pytest.approx(0.32)
    assert rows["PRNG"].cycles is None
    assert "256 draws" in rows["PRNG"].note


@pytest.mark.parametrize(
    "kw",
    [{"trials": 0}, {"f_clk_hz": 0}, {"c_iter": 0}, {"c_acc": -1}, {"rank_k": 17}],
)
def test_latency_config_validation(kw):
    with pytest.raises(ConfigurationError):
        LatencyConfig(**kw)


# ----------------------------------------------------------
# Monte Carlo
# ----------------------------------------------------------

def test_nearest_rank():
    values = list(range(1, 21))
    assert nearest_rank(values, 0.95) == 19
    assert nearest_rank(values, 1.0) == 20
    assert nearest_rank([7], 0.95) == 7


def test_simulation_is_deterministic():
    config = LatencyConfig(rank_k=3, trials=200, rng_seed=42)
    assert simulate(config, 8) == simulate(config, 8)
    assert simulate(config, 8) != simulate(replace(config, rng_seed=43), 8)


def test_simulation_stats_are_ordered():
    stats = simulate(LatencyConfig(rank_k=3, trials=300), 8)
    assert 0 < stats.median_cycles <= stats.p95_cycles
    assert stats.median_us == pytest.approx(stats.median_cycles / 200)
    assert stats.prng == "PCG64"
    assert stats.failures == 0


def test_median_grows_with_rank():
    medians = [simulate(LatencyConfig(rank_k=k, trials=400), 8).median_cycles for k in range(5)]
    assert medians == sorted(medians)
    assert len(set(medians)) == 5


@pytest.mark.slow
@pytest.mark.parametrize(
    "k, median, p95",
    [(3, 13_586, 19_523), (4, 25_510, 36_735)],
)
def test_simulation_reproduces_published_table(k, median, p95):
    stats = simulate(LatencyConfig(rank_k=k, trials=2000), 8)
    assert stats.median_cycles == pytest.approx(median, rel=0.03)
    assert stats.p95_cycles == pytest.approx(p95, rel=0.05)
    assert stats.p95_us < 200.0


@pytest.mark.slow
@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_simulation_mean_converges_to_model(k):
    config = LatencyConfig(rank_k=k, trials=2000)
    assert simulate(config, 8).mean_cycles == pytest.approx(expected_cycles(config, 8), rel=0.02)


# ----------------------------------------------------------
# Real generator
# ----------------------------------------------------------

def test_perturbed_seeds():
    rng = np.random.default_rng(0)
    seeds = {perturbed_seed(PARAMS, rng).frac for _ in range(50)}
    assert len(seeds) == 50
    assert 0 not in seeds
    zero = replace(PARAMS, seed_x0=parse_fraction("0", 64))
    assert perturbed_seed(zero, rng).frac == 0


def test_zero_seed_trials_all_fail():
    zero = replace(PARAMS, seed_x0=parse_fraction("0", 64), budget=10_000)
    stats = measure_real_generator(zero, LatencyConfig(trials=5))
    assert stats.failures == 5
    assert stats.trials == 5
    assert stats.median_cycles is None


def test_real_generator_small_run():
    stats = measure_real_generator(PARAMS, LatencyConfig(trials=5))
    assert stats.failures == 0
    assert stats.source == "real-generator"
    assert stats.median_cycles <= stats.p95_cycles


@pytest.mark.slow
def test_real_generator_close_to_model():
    config = LatencyConfig(rank_k=3, trials=200)
    real = measure_real_generator(PARAMS, config)
    model = simulate(config, 8)
    assert real.failures == 0
    assert real.median_cycles == pytest.approx(model.median_cycles, rel=0.15)
