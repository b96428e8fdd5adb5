# src/chaos_sbox/analysis/differential.py
from __future__ import annotations

from typing import Dict, Tuple

import numpy as np

from chaos_sbox.analysis.walsh import as_array
from chaos_sbox.core.types import SBoxTable


def ddt(table: SBoxTable) -> Tuple[np.ndarray, int, Dict[int, int]]:
    """
    Difference distribution table indexed [dx, dy].

    Returns the table, its maximum over dx != 0, and the value histogram
    over the 2^n (2^n - 1) cells with dx != 0.
    """
    s = as_array(table)
    size = table.size
    x = np.arange(size, dtype=np.int64)
    out_diff = s[x[None, :] ^ x[:, None]] ^ s[None, :]
    cells = (x[:, None] * size + out_diff).ravel()
    full = np.bincount(cells, minlength=size * size).reshape(size, size)

    body = full[1:]
    values, counts = np.unique(body, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    return full, int(body.max()), histogram
