# src/chaos_sbox/generation/generator.py
from __future__ import annotations

import logging
from collections import deque
from typing import Any, Dict, Iterator, List, Tuple

from chaos_sbox.core.errors import InsufficientBlocksError
from chaos_sbox.core.types import GenerationParams, GenTrace, SBoxTable, Stride
from chaos_sbox.dynamics.dyadic import format_gate
from chaos_sbox.dynamics.fixedpoint import iter_orbit
from chaos_sbox.generation.tables import apply_mixer

logger = logging.getLogger(__name__)


def params_to_dict(params: GenerationParams) -> Dict[str, Any]:
    """
    JSON-friendly provenance record; fixed-point values are kept exact as hex.
    """
    return {
        "source": "beta-orbit",
        "beta": {
            "int_part": params.beta.int_part,
            "frac_part": f"{params.beta.frac_part:#x}",
            "approx": round(params.beta.value, 12),
        },
        "x0": {
            "frac": f"{params.seed_x0.frac:#x}",
            "approx": round(params.seed_x0.value, 12),
        },
        "gate": format_gate(params.gate),
        "word_size": params.word_size,
        "width": params.width,
        "budget": params.budget,
        "mixer": str(params.mixer),
        "stride": str(params.stride),
        "window_offset": params.window_offset,
    }


# ======================================================================
# Gated word stream
# ======================================================================

def iter_gated_words(params: GenerationParams) -> Iterator[Tuple[int, int]]:
    """
    Yield (tau, word) for every gate time tau < M - n - d.

    The gate looks at T^tau(x0); the word packs b[tau+d .. tau+d+n-1]
    LSB-first. No duplicate rejection happens here.
    """
    n = params.word_size
    span = params.window_offset + n
    tau_limit = params.budget - span
    skip = params.stride is Stride.SKIP_AFTER_ACCEPT

    shift = params.width - params.gate.rank
    members = params.gate.members
    top = n - 1

    flags: deque[int] = deque()
    register = 0  # last n bits, oldest at bit 0
    for m, (frac, _, bit) in enumerate(iter_orbit(params.beta, params.seed_x0)):
        flags.append((members >> (frac >> shift)) & 1)
        register = (register >> 1) | (bit << top)
        if len(flags) < span:
            continue
        tau = m - span + 1
        if tau >= tau_limit:
            return
        if flags.popleft():
            yield tau, register
            if skip:
                # the next candidate gate time is tau + d + n
                flags.clear()


# ======================================================================
# Table generation
# ======================================================================

def generate(params: GenerationParams) -> SBoxTable:
    """
    Collect 2^n distinct gated words in order of first appearance, then
    apply the index mixer: S(x) = L[pi(x)].
    """
    size = 1 << params.word_size
    seen = bytearray(size)
    collected: List[int] = []
    growth: List[int] = []
    acceptances = 0
    duplicates = 0
    span = params.window_offset + params.word_size
    # orbit steps consumed, including the final window
    iterations = params.budget

    for tau, word in iter_gated_words(params):
        acceptances += 1
        if seen[word]:
            duplicates += 1
            continue
        seen[word] = 1
        collected.append(word)
        growth.append(tau)
        if len(collected) == size:
            iterations = tau + span
            break

    trace = GenTrace(
        iterations=iterations,
        acceptances=acceptances,
        duplicates=duplicates,
        growth=tuple(growth),
    )

    if len(collected) < size:
        logger.warning(
            "generator: budget exhausted with %d/%d distinct words (%d acceptances)",
            len(collected),
            size,
            acceptances,
        )
        raise InsufficientBlocksError(len(collected), size, iterations)

    logger.info(
        "generator: table complete after %d iterations (%d acceptances, %d duplicates)",
        iterations,
        acceptances,
        duplicates,
    )
    table = SBoxTable(
        n=params.word_size,
        table=tuple(collected),
        provenance=params_to_dict(params),
        gen_trace=trace,
    )
    return apply_mixer(table, params.mixer)
