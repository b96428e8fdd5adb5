# src/chaos_sbox/latency/simulation.py
from __future__ import annotations

import logging
import math
from dataclasses import replace
from typing import List, Sequence

import numpy as np

from chaos_sbox.core.errors import InsufficientBlocksError
from chaos_sbox.core.types import (
    FixedPointState,
    GenerationParams,
    LatencyConfig,
    LatencyStats,
)
from chaos_sbox.generation.generator import generate
from chaos_sbox.latency.model import cycles_to_time

logger = logging.getLogger(__name__)

PRNG_NAME = "PCG64"


def trial_rng(config: LatencyConfig, trial: int) -> np.random.Generator:
    """Independent stream per (seed, trial); order of evaluation is irrelevant."""
    return np.random.default_rng(np.random.SeedSequence([config.rng_seed, trial]))


def nearest_rank(sorted_values: Sequence[float], q: float) -> float:
    """Nearest-rank percentile of an ascending sequence, q in (0, 1]."""
    rank = max(1, math.ceil(q * len(sorted_values)))
    return float(sorted_values[rank - 1])


def summarize(
    source: str,
    cycles: Sequence[int],
    config: LatencyConfig,
    *,
    trials: int,
    failures: int = 0,
) -> LatencyStats:
    if not len(cycles):
        return LatencyStats(
            source=source,
            trials=trials,
            median_cycles=None,
            p95_cycles=None,
            mean_cycles=None,
            median_us=None,
            p95_us=None,
            failures=failures,
            prng=PRNG_NAME,
        )
    ordered = np.sort(np.asarray(cycles, dtype=np.float64))
    median = float(np.median(ordered))
    p95 = nearest_rank(ordered, 0.95)
    return LatencyStats(
        source=source,
        trials=trials,
        median_cycles=median,
        p95_cycles=p95,
        mean_cycles=float(ordered.mean()),
        median_us=cycles_to_time(median, config.f_clk_hz),
        p95_us=cycles_to_time(p95, config.f_clk_hz),
        failures=failures,
        prng=PRNG_NAME,
    )


# ======================================================================
# Abstract Bernoulli-gated coupon collector
# ======================================================================

def _coupon_draws(rng: np.random.Generator, size: int) -> int:
    """Uniform draws from {0..size-1} until every value has appeared."""
    seen = np.zeros(size, dtype=bool)
    missing = size
    drawn = 0
    chunk = max(64, 4 * size)
    while True:
        values, first = np.unique(rng.integers(0, size, chunk), return_index=True)
        fresh = ~seen[values]
        found = int(fresh.sum())
        if found == missing:
            return drawn + int(first[fresh].max()) + 1
        seen[values] = True
        missing -= found
        drawn += chunk


def simulate(config: LatencyConfig, n: int) -> LatencyStats:
    """
    Monte Carlo of the gated collector: each iteration costs c_iter and is
    accepted with probability p; an accepted draw costs c_acc more and yields
    a uniform n-bit coupon. A trial ends when all 2^n coupons are seen.
    """
    size = 1 << n
    p = config.p
    cycles: List[int] = []
    for trial in range(config.trials):
        rng = trial_rng(config, trial)
        accepted = _coupon_draws(rng, size)
        # failures before the accepted-th success
        rejected = 0 if p >= 1.0 else int(rng.negative_binomial(accepted, p))
        iterations = accepted + rejected
        cycles.append(config.c_iter * iterations + config.c_acc * accepted)

    stats = summarize("monte-carlo", cycles, config, trials=config.trials)
    logger.info(
        "latency: k=%d n=%d trials=%d median=%.0f p95=%.0f cycles",
        config.rank_k,
        n,
        config.trials,
        stats.median_cycles,
        stats.p95_cycles,
    )
    return stats


# ======================================================================
# The actual orbit generator
# ======================================================================

def perturbed_seed(params: GenerationParams, rng: np.random.Generator) -> FixedPointState:
    """
    x0 * m mod 2^B for an odd multiplier m; zero stays zero.
    """
    width = params.width
    nbytes = (width + 7) // 8
    multiplier = int.from_bytes(rng.bytes(nbytes), "little") | 1
    frac = (params.seed_x0.frac * multiplier) & ((1 << width) - 1)
    return FixedPointState(frac=frac, width=width)


def measure_real_generator(params: GenerationParams, config: LatencyConfig) -> LatencyStats:
    """
    Run ``generate`` over ``config.trials`` perturbed seeds and convert each
    gen_trace into cycles. Failed trials are counted in ``failures``.
    """
    cycles: List[int] = []
    failures = 0
    for trial in range(config.trials):
        seed = perturbed_seed(params, trial_rng(config, trial))
        try:
            table = generate(replace(params, seed_x0=seed))
        except InsufficientBlocksError as exc:
            failures += 1
            logger.debug("latency: trial %d failed: %s", trial, exc)
            continue
        trace = table.gen_trace
        cycles.append(config.c_iter * trace.iterations + config.c_acc * trace.acceptances)

    if failures:
        logger.warning(
            "latency: %d/%d real-generator trials ended in InsufficientBlocks",
            failures,
            config.trials,
        )
    return summarize("real-generator", cycles, config, trials=config.trials, failures=failures)
