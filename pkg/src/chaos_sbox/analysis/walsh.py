# src/chaos_sbox/analysis/walsh.py
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from chaos_sbox.core.types import SBoxTable

logger = logging.getLogger(__name__)


def as_array(table: SBoxTable) -> np.ndarray:
    return np.asarray(table.table, dtype=np.int64)


def fwht(values: np.ndarray) -> np.ndarray:
    """
    Unnormalized fast Walsh-Hadamard transform along the last axis.

    Natural (Sylvester) ordering: out[..., a] = sum_x (-1)^(a.x) values[..., x].
    """
    w = np.array(values, dtype=np.int64, copy=True)
    size = w.shape[-1]
    if size & (size - 1):
        raise ValueError(f"transform length must be a power of two, got {size}")
    lead = w.shape[:-1]
    h = 1
    while h < size:
        w = w.reshape(*lead, -1, 2, h)
        top = w[..., 0, :]
        bottom = w[..., 1, :]
        w = np.stack((top + bottom, top - bottom), axis=-2)
        h *= 2
    return w.reshape(*lead, size)


def _signs(values: np.ndarray) -> np.ndarray:
    return 1 - 2 * (np.bitwise_count(values) & 1).astype(np.int64)


def walsh_row(table: SBoxTable, output_mask: int) -> np.ndarray:
    """W_S(a, b) for all a at a fixed output mask b."""
    return fwht(_signs(as_array(table) & output_mask))


def walsh_matrix(table: SBoxTable) -> np.ndarray:
    """
    Full spectrum indexed [b, a]; row b is ``walsh_row(table, b)``.
    """
    s = as_array(table)
    masks = np.arange(table.size, dtype=np.int64)
    return fwht(_signs(masks[:, None] & s[None, :]))


# ======================================================================
# Nonlinearity
# ======================================================================

def nonlinearity(table: SBoxTable) -> Tuple[List[int], int]:
    """
    Per-output-bit NL (unit masks b = e_i) and the component minimum over
    every b != 0. The a = 0 column is left out of each maximum.
    """
    if not table.is_bijective():
        logger.warning("walsh: nonlinearity of a non-bijective table")
    half = table.size // 2
    row_max = np.abs(walsh_matrix(table)[:, 1:]).max(axis=1)
    per_bit = [int(half - row_max[1 << i] // 2) for i in range(table.n)]
    component_min = int(half - row_max[1:].max() // 2)
    return per_bit, component_min


# ======================================================================
# Linear approximation table
# ======================================================================

def lat(table: SBoxTable) -> Tuple[np.ndarray, int, Fraction, Dict[int, int]]:
    """
    LAT[alpha, beta] = #agree - #disagree = W_S(alpha, beta).

    Maximum and histogram run over beta != 0. The linear probability is
    the agreement fraction (2^n + max|LAT|) / 2^(n+1).
    """
    table_lat = walsh_matrix(table).T
    body = np.abs(table_lat[:, 1:])
    lat_max_abs = int(body.max())
    linear_prob_max = Fraction(table.size + lat_max_abs, 2 * table.size)
    values, counts = np.unique(body, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    return table_lat, lat_max_abs, linear_prob_max, histogram
