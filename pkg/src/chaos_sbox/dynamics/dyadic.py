# src/chaos_sbox/dynamics/dyadic.py
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterator

from chaos_sbox.core.errors import ConfigurationError
from chaos_sbox.core.types import DyadicSet, FixedPointState, GenerationParams
from chaos_sbox.dynamics.fixedpoint import iter_orbit

logger = logging.getLogger(__name__)


def contains(gate: DyadicSet, state: FixedPointState) -> bool:
    """
    x in C, read off the top k bits of the fixed-point fraction.
    """
    index = state.frac >> (state.width - gate.rank)
    return bool((gate.members >> index) & 1)


def lebesgue_measure(gate: DyadicSet) -> Fraction:
    return Fraction(gate.members.bit_count(), 1 << gate.rank)


def sampling_times(params: GenerationParams, limit: int) -> Iterator[int]:
    """
    Orbit indices m < limit with T^m(x0) in C, in increasing order.

    Index 0 (the seed itself) goes through the gate like every other index.
    """
    if limit < 1:
        raise ConfigurationError("limit must be >= 1")
    gate = params.gate
    shift = params.width - gate.rank
    members = gate.members
    orbit = iter_orbit(params.beta, params.seed_x0)
    for m in range(limit):
        frac, _, _ = next(orbit)
        if (members >> (frac >> shift)) & 1:
            yield m


# ----------------------------------------------------------
# "k:j0,j1,..." syntax
# ----------------------------------------------------------

def parse_gate(text: str) -> DyadicSet:
    """
    "3:5" -> rank 3, interval 5; "0:0" is the whole unit interval.
    """
    try:
        rank_part, _, index_part = text.strip().partition(":")
        rank = int(rank_part)
        indices = sorted({int(tok) for tok in index_part.split(",") if tok.strip()})
    except ValueError as exc:
        raise ConfigurationError(f"gate must look like 'k:j0,j1,...': {text!r}") from exc
    if not indices:
        raise ConfigurationError(f"gate lists no intervals: {text!r}")
    return DyadicSet.from_indices(rank, indices)


def format_gate(gate: DyadicSet) -> str:
    return f"{gate.rank}:" + ",".join(str(j) for j in gate.indices)
