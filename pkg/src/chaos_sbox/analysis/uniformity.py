# src/chaos_sbox/analysis/uniformity.py
from __future__ import annotations

import logging
from itertools import islice
from typing import Tuple

import numpy as np
from scipy.stats import chi2 as chi2_dist

from chaos_sbox.core.errors import ConfigurationError, GeneratorStallError
from chaos_sbox.core.types import GenerationParams, UniformityResult
from chaos_sbox.generation.generator import iter_gated_words

logger = logging.getLogger(__name__)


def chi_square_statistic(counts: np.ndarray) -> float:
    """Pearson statistic against equal expected bins."""
    counts = np.asarray(counts, dtype=np.float64)
    expected = counts.sum() / counts.size
    return float(((counts - expected) ** 2 / expected).sum())


def pass_band(dof: int, confidence: float = 0.999) -> Tuple[float, float]:
    """Central ``confidence`` interval of the chi-square distribution."""
    tail = (1.0 - confidence) / 2.0
    return float(chi2_dist.ppf(tail, dof)), float(chi2_dist.ppf(1.0 - tail, dof))


def uniformity_test(
    params: GenerationParams,
    samples: int,
    *,
    confidence: float = 0.999,
) -> UniformityResult:
    """
    Chi-square test over the raw gated word stream (no duplicate rejection).
    """
    bins = 1 << params.word_size
    if samples < 50 * bins:
        raise ConfigurationError(f"need at least {50 * bins} samples for {bins} bins")

    words = [word for _, word in islice(iter_gated_words(params), samples)]
    if len(words) < samples:
        raise GeneratorStallError(
            f"gate produced {len(words)}/{samples} words within budget M={params.budget}"
        )

    counts = np.bincount(np.asarray(words, dtype=np.int64), minlength=bins)
    statistic = chi_square_statistic(counts)
    dof = bins - 1
    lower, upper = pass_band(dof, confidence)
    # only excess concentration fails; a too-even tally is flagged, not failed
    passed = statistic <= upper
    too_regular = statistic < lower
    if too_regular:
        logger.warning(
            "uniformity: chi2=%.2f below %.1f, counts are suspiciously even",
            statistic,
            lower,
        )
    logger.info(
        "uniformity: chi2=%.2f dof=%d band=[%.1f, %.1f] passed=%s",
        statistic,
        dof,
        lower,
        upper,
        passed,
    )
    return UniformityResult(
        chi2=statistic,
        dof=dof,
        samples=samples,
        passed=passed,
        lower=lower,
        upper=upper,
        too_regular=too_regular,
    )
