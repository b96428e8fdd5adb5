# src/chaos_sbox/analysis/anf.py
from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from chaos_sbox.analysis.walsh import as_array
from chaos_sbox.core.types import SBoxTable


@dataclass
class AnfResult:
    coefficients: np.ndarray        # [bit, monomial index I]
    per_bit_degree: List[int]
    monomial_counts: List[float]    # mean count per degree 0..n


def moebius(truth_tables: np.ndarray) -> np.ndarray:
    """
    Binary Moebius transform along the last axis (an involution).

    Truth table -> ANF coefficients a_I, where bit j of I marks x_j.
    """
    w = np.array(truth_tables, dtype=np.uint8, copy=True)
    size = w.shape[-1]
    if size & (size - 1):
        raise ValueError(f"transform length must be a power of two, got {size}")
    lead = w.shape[:-1]
    h = 1
    while h < size:
        w = w.reshape(*lead, -1, 2, h)
        w[..., 1, :] ^= w[..., 0, :]
        h *= 2
    return w.reshape(*lead, size)


def coordinate_truth_tables(table: SBoxTable) -> np.ndarray:
    s = as_array(table)
    shifts = np.arange(table.n, dtype=np.int64)[:, None]
    return ((s[None, :] >> shifts) & 1).astype(np.uint8)


def anf(table: SBoxTable) -> AnfResult:
    coefficients = moebius(coordinate_truth_tables(table))
    weights = np.bitwise_count(np.arange(table.size, dtype=np.int64))

    # constant and zero coordinates both report degree 0
    degree = np.where(coefficients == 1, weights[None, :], 0).max(axis=1)

    counts = [
        float(((coefficients == 1) & (weights[None, :] == d)).sum(axis=1).mean())
        for d in range(table.n + 1)
    ]
    return AnfResult(
        coefficients=coefficients,
        per_bit_degree=[int(d) for d in degree],
        monomial_counts=counts,
    )
