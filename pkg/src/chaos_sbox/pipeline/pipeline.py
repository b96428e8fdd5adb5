# src/chaos_sbox/pipeline/pipeline.py
from __future__ import annotations

import logging
from dataclasses import replace
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import pandas as pd

from chaos_sbox.analysis.report import analyze, heuristic_nl_bound
from chaos_sbox.config import SBoxConfig, load_config
from chaos_sbox.core.errors import ConfigurationError, InsufficientBlocksError
from chaos_sbox.core.types import (
    CryptoReport,
    DyadicSet,
    GenerationParams,
    LatencyConfig,
    Mixer,
    MixerKind,
    SBoxTable,
    Stride,
)
from chaos_sbox.dynamics.dyadic import format_gate, parse_gate
from chaos_sbox.dynamics.fixedpoint import parse_beta, parse_fraction
from chaos_sbox.generation.generator import generate
from chaos_sbox.generation.tables import gf_baseline_sbox
from chaos_sbox.latency.model import baseline_rows, cycles_to_time, expected_cycles
from chaos_sbox.latency.simulation import measure_real_generator, simulate

logger = logging.getLogger(__name__)

LATENCY_COLUMNS = ["design", "k", "median_cycles", "p95_cycles", "median_us", "p95_us"]
COMPARE_COLUMNS = [
    "design",
    "avg_nl",
    "min_nl",
    "component_min_nl",
    "ddt_max",
    "ddt_max_prob",
    "lat_max_abs",
    "linear_prob_max",
    "min_degree",
]


# ----------------------------------------------------------
# Text -> typed values
# ----------------------------------------------------------

def parse_mixer(text: str) -> Mixer:
    """
    "identity" or "xor-rotate:<const>" (decimal or 0x-prefixed hex).
    """
    kind, _, const = str(text).strip().lower().partition(":")
    if kind == MixerKind.IDENTITY:
        if const:
            raise ConfigurationError("identity mixer takes no constant")
        return Mixer()
    if kind == MixerKind.XOR_ROTATE:
        try:
            constant = int(const or "0", 0)
        except ValueError as exc:
            raise ConfigurationError(f"bad mixer constant: {text!r}") from exc
        return Mixer(kind=MixerKind.XOR_ROTATE, constant=constant)
    raise ConfigurationError(f"unknown mixer: {text!r}")


def parse_stride(text: str) -> Stride:
    try:
        return Stride(str(text).strip().lower())
    except ValueError as exc:
        raise ConfigurationError(f"unknown stride: {text!r}") from exc


def gate_at_rank(gate: DyadicSet, rank: int) -> DyadicSet:
    """
    Single rank-``rank`` interval holding the left end of ``gate``'s lowest interval.
    """
    left = gate.indices[0]
    if rank >= gate.rank:
        index = left << (rank - gate.rank)
    else:
        index = left >> (gate.rank - rank)
    return DyadicSet.from_indices(rank, [index])


def _metric_row(design: str, report: CryptoReport) -> Dict[str, Any]:
    return {
        "design": design,
        "avg_nl": report.avg_nl,
        "min_nl": report.min_nl,
        "component_min_nl": report.component_min_nl,
        "ddt_max": report.ddt_max,
        "ddt_max_prob": float(report.ddt_max_prob),
        "lat_max_abs": report.lat_max_abs,
        "linear_prob_max": float(report.linear_prob_max),
        "min_degree": min(report.per_bit_degree),
    }


# ----------------------------------------------------------
# Main Pipeline
# ----------------------------------------------------------
class SBoxPipeline:
    """
    Binds the shipped defaults to generation, analysis and latency modelling.

    Every ``build_*`` helper takes optional overrides; anything left as None
    falls back to ``defaults.yaml``.
    """

    def __init__(self, config: Optional[SBoxConfig] = None):
        self.cfg = config or load_config()

    # --------------------------------------------------
    # Parameter assembly
    # --------------------------------------------------
    def build_params(
        self,
        *,
        beta: Optional[str] = None,
        x0: Optional[str] = None,
        gate: Optional[str | DyadicSet] = None,
        word_size: Optional[int] = None,
        width: Optional[int] = None,
        budget: Optional[int] = None,
        mixer: Optional[str] = None,
        stride: Optional[str] = None,
        window_offset: Optional[int] = None,
    ) -> GenerationParams:
        g = self.cfg.generation
        width = int(width if width is not None else g.width)
        chosen_gate = gate if gate is not None else g.gate
        if not isinstance(chosen_gate, DyadicSet):
            chosen_gate = parse_gate(str(chosen_gate))
        return GenerationParams(
            beta=parse_beta(str(beta if beta is not None else g.beta), width),
            seed_x0=parse_fraction(str(x0 if x0 is not None else g.x0), width),
            gate=chosen_gate,
            word_size=int(word_size if word_size is not None else g.word_size),
            budget=int(budget if budget is not None else g.budget),
            mixer=parse_mixer(mixer if mixer is not None else g.mixer),
            stride=parse_stride(stride if stride is not None else g.stride),
            window_offset=int(window_offset if window_offset is not None else g.window_offset),
        )

    def build_latency_config(self, **overrides: Any) -> LatencyConfig:
        lat = self.cfg.latency
        values = {
            "rank_k": lat.rank_k,
            "c_iter": lat.c_iter,
            "c_acc": lat.c_acc,
            "f_clk_hz": lat.f_clk_hz,
            "trials": lat.trials,
            "rng_seed": lat.rng_seed,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return LatencyConfig(
            rank_k=int(values["rank_k"]),
            c_iter=int(values["c_iter"]),
            c_acc=int(values["c_acc"]),
            f_clk_hz=float(values["f_clk_hz"]),
            trials=int(values["trials"]),
            rng_seed=int(values["rng_seed"]),
        )

    # --------------------------------------------------
    # Quality
    # --------------------------------------------------
    def analyze(
        self,
        table: SBoxTable,
        params: Optional[GenerationParams] = None,
        *,
        uniformity_samples: Optional[int] = None,
    ) -> CryptoReport:
        if params is not None and uniformity_samples is None:
            uniformity_samples = int(self.cfg.uniformity.samples)
        return analyze(
            table,
            params,
            uniformity_samples=uniformity_samples,
            confidence=float(self.cfg.uniformity.confidence),
            heuristic_c=float(self.cfg.analysis.heuristic_c),
        )

    def compare(self, params: GenerationParams, *, context: bool = True) -> pd.DataFrame:
        """
        Generated table vs the GF(2^8) baseline vs the published instance.
        """
        generated = self.analyze(generate(params))
        baseline = self.analyze(gf_baseline_sbox())
        ref = self.cfg.reference_instance

        rows: List[Dict[str, Any]] = [
            _metric_row("chaotic (generated)", generated),
            _metric_row("gf-baseline", baseline),
            {
                "design": ref.get("name", "published instance"),
                "avg_nl": ref["avg_nl"],
                "min_nl": ref["min_nl"],
                "component_min_nl": None,
                "ddt_max": ref["ddt_max"],
                "ddt_max_prob": ref["ddt_max_prob"],
                "lat_max_abs": ref["lat_max_abs"],
                "linear_prob_max": ref["linear_prob_max"],
                "min_degree": min(ref["per_bit_degree"]),
            },
        ]
        if context:
            rows.extend(self._context_rows(params.word_size))
        return pd.DataFrame(rows, columns=COMPARE_COLUMNS)

    def _context_rows(self, n: int) -> List[Dict[str, Any]]:
        ctx: Mapping[str, Any] = self.cfg.reference_instance.get("context", {})
        return [
            {"design": "bijection ideal", "ddt_max": ctx.get("bijection_ideal_ddt_max")},
            {
                "design": "bent reference",
                "lat_max_abs": ctx.get("bent_lat_max_abs"),
                "linear_prob_max": ctx.get("bent_linear_prob"),
            },
            {"design": "practical NL ceiling", "avg_nl": ctx.get("practical_nl_ceiling")},
            {
                "design": "heuristic NL bound",
                "avg_nl": round(heuristic_nl_bound(n, float(self.cfg.analysis.heuristic_c)), 2),
            },
        ]

    # --------------------------------------------------
    # Latency
    # --------------------------------------------------
    def latency_table(
        self,
        config: LatencyConfig,
        n: int = 8,
        *,
        real_params: Optional[GenerationParams] = None,
        real_trials: Optional[int] = None,
    ) -> Tuple[pd.DataFrame, bool]:
        """
        Model prediction, Monte Carlo, optional real-generator run and the
        fixed baselines. Also returns whether the Monte Carlo P95 stays
        under the configured latency budget.

        The real generator is run at rank ``config.rank_k``; a gate of another
        rank is replaced by ``gate_at_rank`` first.
        """
        rows: List[Dict[str, Any]] = []
        k = config.rank_k

        mean = expected_cycles(config, n)
        rows.append({
            "design": "coupon-collector model (expected)",
            "k": k,
            "median_cycles": round(mean, 2),
            "p95_cycles": None,
            "median_us": round(cycles_to_time(mean, config.f_clk_hz), 4),
            "p95_us": None,
        })

        sim = simulate(config, n)
        rows.append({
            "design": "chaotic (monte carlo)",
            "k": k,
            "median_cycles": sim.median_cycles,
            "p95_cycles": sim.p95_cycles,
            "median_us": round(sim.median_us, 4),
            "p95_us": round(sim.p95_us, 4),
        })

        if real_params is not None:
            if real_params.gate.rank != k:
                gate = gate_at_rank(real_params.gate, k)
                logger.info(
                    "pipeline: measuring with gate %s to match k=%d",
                    format_gate(gate),
                    k,
                )
                real_params = replace(real_params, gate=gate)
            trials = int(real_trials or self.cfg.latency.real_trials)
            real = measure_real_generator(real_params, replace(config, trials=trials))
            rows.append({
                "design": f"chaotic (measured, {real.failures} failed)",
                "k": real_params.gate.rank,
                "median_cycles": real.median_cycles,
                "p95_cycles": real.p95_cycles,
                "median_us": None if real.median_us is None else round(real.median_us, 4),
                "p95_us": None if real.p95_us is None else round(real.p95_us, 4),
            })

        for base in baseline_rows():
            rows.append({
                "design": base.name if not base.note else f"{base.name} ({base.note})",
                "k": None,
                "median_cycles": base.cycles,
                "p95_cycles": None,
                "median_us": base.microseconds,
                "p95_us": None,
            })

        budget_us = float(self.cfg.latency.budget_us)
        within_budget = sim.p95_us < budget_us
        logger.info(
            "pipeline: k=%d P95 %.2f us vs budget %.1f us -> %s",
            k,
            sim.p95_us,
            budget_us,
            "OK" if within_budget else "EXCEEDED",
        )
        frame = pd.DataFrame(rows, columns=LATENCY_COLUMNS)
        frame["k"] = frame["k"].astype("Int64")
        return frame, within_budget

    # --------------------------------------------------
    # Operating-point sweep
    # --------------------------------------------------
    def sweep(
        self,
        ranks: Iterable[int],
        widths: Iterable[int],
        latency_config: LatencyConfig,
        *,
        real_trials: Optional[int] = None,
        **overrides: Any,
    ) -> pd.DataFrame:
        """
        One row per (k, B): measured latency of the real generator and the
        quality of the table built from the base seed.
        """
        base_gate = parse_gate(str(overrides.pop("gate", None) or self.cfg.generation.gate))
        overrides.pop("width", None)
        trials = int(real_trials or self.cfg.latency.real_trials)
        rows: List[Dict[str, Any]] = []
        for width in widths:
            for k in ranks:
                params = self.build_params(gate=gate_at_rank(base_gate, k), width=width, **overrides)
                config = replace(latency_config, rank_k=k, trials=trials)
                real = measure_real_generator(params, config)
                row: Dict[str, Any] = {
                    "k": k,
                    "width": width,
                    "model_cycles": round(expected_cycles(config, params.word_size), 2),
                    "median_cycles": real.median_cycles,
                    "p95_cycles": real.p95_cycles,
                    "median_us": real.median_us,
                    "p95_us": real.p95_us,
                    "failures": real.failures,
                    "avg_nl": None,
                    "ddt_max": None,
                    "lat_max_abs": None,
                    "min_degree": None,
                }
                try:
                    report = self.analyze(generate(params))
                except InsufficientBlocksError as exc:
                    logger.warning("pipeline: sweep point k=%d B=%d: %s", k, width, exc)
                else:
                    row.update(
                        avg_nl=report.avg_nl,
                        ddt_max=report.ddt_max,
                        lat_max_abs=report.lat_max_abs,
                        min_degree=min(report.per_bit_degree),
                    )
                rows.append(row)
        return pd.DataFrame(rows)


# ----------------------------------------------------------
# Convenience wrappers
# ----------------------------------------------------------

def run_generate(**overrides: Any) -> SBoxTable:
    pipeline = SBoxPipeline()
    return generate(pipeline.build_params(**overrides))


def run_compare(**overrides: Any) -> pd.DataFrame:
    pipeline = SBoxPipeline()
    return pipeline.compare(pipeline.build_params(**overrides))
