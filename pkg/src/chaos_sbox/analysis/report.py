# src/chaos_sbox/analysis/report.py
from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional

from chaos_sbox.analysis.anf import anf
from chaos_sbox.analysis.differential import ddt
from chaos_sbox.analysis.uniformity import uniformity_test
from chaos_sbox.analysis.walsh import lat, nonlinearity
from chaos_sbox.core.types import (
    CryptoReport,
    GenerationParams,
    SBoxTable,
    UniformityResult,
)

logger = logging.getLogger(__name__)


def heuristic_nl_bound(n: int, c: float = 1.0) -> float:
    """
    2^(n-1) - c * sqrt(2^n * ln 2^n). Display only; never enforced.
    """
    size = 1 << n
    return size / 2 - c * math.sqrt(size * math.log(size))


def analyze(
    table: SBoxTable,
    params: Optional[GenerationParams] = None,
    *,
    uniformity_samples: Optional[int] = None,
    confidence: float = 0.999,
    heuristic_c: float = 1.0,
) -> CryptoReport:
    """
    Run the full metric suite over ``table``.

    When ``params`` is given the raw gated word stream that produced the
    table is also tested for uniformity.
    """
    bijective = table.is_bijective()
    if not bijective:
        logger.warning("report: table (%s) is not a permutation", table.provenance.get("source"))

    per_bit, component_min = nonlinearity(table)
    _, ddt_max, ddt_hist = ddt(table)
    _, lat_max_abs, linear_prob_max, lat_hist = lat(table)
    anf_result = anf(table)

    uniformity: Optional[UniformityResult] = None
    if params is not None:
        samples = uniformity_samples or 50 * (1 << params.word_size)
        uniformity = uniformity_test(params, samples, confidence=confidence)

    report = CryptoReport(
        n=table.n,
        bijective=bijective,
        per_bit_nonlinearity=per_bit,
        min_nl=min(per_bit),
        avg_nl=sum(per_bit) / len(per_bit),
        component_min_nl=component_min,
        heuristic_nl_bound=heuristic_nl_bound(table.n, heuristic_c),
        ddt_max=ddt_max,
        ddt_max_prob=Fraction(ddt_max, table.size),
        ddt_histogram=ddt_hist,
        lat_max_abs=lat_max_abs,
        linear_prob_max=linear_prob_max,
        lat_histogram=lat_hist,
        per_bit_degree=anf_result.per_bit_degree,
        anf_monomial_counts=anf_result.monomial_counts,
        uniformity_chi2=uniformity,
    )
    logger.info(
        "report: avg_nl=%.2f min_nl=%d ddt_max=%d lat_max=%d degree=%s",
        report.avg_nl,
        report.min_nl,
        report.ddt_max,
        report.lat_max_abs,
        report.per_bit_degree,
    )
    return report


# ======================================================================
# JSON mapping
# ======================================================================

def report_to_dict(report: CryptoReport) -> Dict[str, Any]:
    """
    JSON-friendly dict. Rationals are kept exact as "p/q" strings next to
    their float value.
    """
    data: Dict[str, Any] = {
        "n": report.n,
        "bijective": report.bijective,
        "per_bit_nonlinearity": list(report.per_bit_nonlinearity),
        "min_nl": report.min_nl,
        "avg_nl": report.avg_nl,
        "component_min_nl": report.component_min_nl,
        "heuristic_nl_bound": report.heuristic_nl_bound,
        "ddt_max": report.ddt_max,
        "ddt_max_prob": str(report.ddt_max_prob),
        "ddt_max_prob_float": float(report.ddt_max_prob),
        "ddt_histogram": {str(k): v for k, v in sorted(report.ddt_histogram.items())},
        "lat_max_abs": report.lat_max_abs,
        "linear_prob_max": str(report.linear_prob_max),
        "linear_prob_max_float": float(report.linear_prob_max),
        "lat_histogram": {str(k): v for k, v in sorted(report.lat_histogram.items())},
        "per_bit_degree": list(report.per_bit_degree),
        "anf_monomial_counts": list(report.anf_monomial_counts),
        "uniformity_chi2": None,
    }
    u = report.uniformity_chi2
    if u is not None:
        data["uniformity_chi2"] = {
            "chi2": u.chi2,
            "dof": u.dof,
            "samples": u.samples,
            "passed": u.passed,
            "lower": u.lower,
            "upper": u.upper,
            "too_regular": u.too_regular,
        }
    return data


def report_from_dict(data: Mapping[str, Any]) -> CryptoReport:
    u = data.get("uniformity_chi2")
    return CryptoReport(
        n=int(data["n"]),
        bijective=bool(data["bijective"]),
        per_bit_nonlinearity=[int(v) for v in data["per_bit_nonlinearity"]],
        min_nl=int(data["min_nl"]),
        avg_nl=float(data["avg_nl"]),
        component_min_nl=int(data["component_min_nl"]),
        heuristic_nl_bound=float(data["heuristic_nl_bound"]),
        ddt_max=int(data["ddt_max"]),
        ddt_max_prob=Fraction(data["ddt_max_prob"]),
        ddt_histogram={int(k): int(v) for k, v in data["ddt_histogram"].items()},
        lat_max_abs=int(data["lat_max_abs"]),
        linear_prob_max=Fraction(data["linear_prob_max"]),
        lat_histogram={int(k): int(v) for k, v in data["lat_histogram"].items()},
        per_bit_degree=[int(v) for v in data["per_bit_degree"]],
        anf_monomial_counts=[float(v) for v in data["anf_monomial_counts"]],
        uniformity_chi2=None if u is None else UniformityResult(**u),
    )
