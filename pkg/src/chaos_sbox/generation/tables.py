# src/chaos_sbox/generation/tables.py
from __future__ import annotations

import logging
from typing import List

from chaos_sbox.core.errors import ConfigurationError, NonBijectiveError
from chaos_sbox.core.types import Mixer, MixerKind, SBoxTable

logger = logging.getLogger(__name__)

# x^8 + x^4 + x^3 + x + 1
AES_MODULUS = 0x11B
AES_AFFINE_CONSTANT = 0x63


def rotl(x: int, shift: int, size: int) -> int:
    """Rotate an ``size``-bit word left."""
    mask = (1 << size) - 1
    shift %= size
    x &= mask
    return ((x << shift) | (x >> (size - shift))) & mask


def _require_bijective(table: SBoxTable, what: str) -> None:
    if not table.is_bijective():
        raise NonBijectiveError(f"{what} needs a bijective table")


# ======================================================================
# Index mixer
# ======================================================================

def apply_mixer(table: SBoxTable, mixer: Mixer) -> SBoxTable:
    """
    S'(x) = S[pi(x)] with pi = identity or pi(x) = rotl_n(x, 1) ^ c.
    """
    if mixer.kind is MixerKind.IDENTITY:
        return table
    _require_bijective(table, "apply_mixer")
    n = table.n
    if not 0 <= mixer.constant < table.size:
        raise ConfigurationError(f"mixer constant does not fit in {n} bits")
    permuted = tuple(
        table.table[rotl(x, 1, n) ^ mixer.constant] for x in range(table.size)
    )
    return SBoxTable(
        n=n,
        table=permuted,
        provenance={**table.provenance, "mixer": str(mixer)},
        gen_trace=table.gen_trace,
    )


# ======================================================================
# Table algebra
# ======================================================================

def substitute(table: SBoxTable, data: bytes) -> bytes:
    """Push every byte of ``data`` through an 8-bit table."""
    if table.n != 8:
        raise ConfigurationError(f"byte substitution needs n = 8, table has n = {table.n}")
    return bytes(table.table[b] for b in data)


def invert(table: SBoxTable) -> SBoxTable:
    _require_bijective(table, "invert")
    inverse: List[int] = [0] * table.size
    for x, y in enumerate(table.table):
        inverse[y] = x
    return SBoxTable(
        n=table.n,
        table=tuple(inverse),
        provenance={"source": "inverse", "of": table.provenance.get("source", "unknown")},
    )


def identity_sbox(n: int = 8) -> SBoxTable:
    return SBoxTable(n=n, table=tuple(range(1 << n)), provenance={"source": "identity"})


# ----------------------------------------------------------
# GF(2^8) inversion + affine (the reference baseline)
# ----------------------------------------------------------

def gf_mul(a: int, b: int) -> int:
    result = 0
    while b:
        if b & 1:
            result ^= a
        a <<= 1
        if a & 0x100:
            a ^= AES_MODULUS
        b >>= 1
    return result


def gf_inverse(a: int) -> int:
    """a^254 = a^-1 in GF(2^8); 0 maps to 0."""
    result = 1
    base = a
    exponent = 254
    while exponent:
        if exponent & 1:
            result = gf_mul(result, base)
        base = gf_mul(base, base)
        exponent >>= 1
    return result if a else 0


def _affine(b: int) -> int:
    return (
        b
        ^ rotl(b, 1, 8)
        ^ rotl(b, 2, 8)
        ^ rotl(b, 3, 8)
        ^ rotl(b, 4, 8)
        ^ AES_AFFINE_CONSTANT
    )


def gf_baseline_sbox() -> SBoxTable:
    return SBoxTable(
        n=8,
        table=tuple(_affine(gf_inverse(x)) for x in range(256)),
        provenance={"source": "gf-baseline"},
    )
