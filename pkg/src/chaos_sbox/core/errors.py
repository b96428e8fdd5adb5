# src/chaos_sbox/core/errors.py
from __future__ import annotations


class ChaosSBoxError(Exception):
    """Base class for every error raised by chaos_sbox."""


class ConfigurationError(ChaosSBoxError, ValueError):
    """Invalid parameters: width mismatch, bad beta, empty gate, short budget..."""


class NonBijectiveError(ChaosSBoxError, ValueError):
    """An operation that needs a permutation was handed something else."""


class TableFormatError(ChaosSBoxError, ValueError):
    """A table file (hex grid or JSON) could not be parsed."""


class InsufficientBlocksError(ChaosSBoxError):
    """
    The iteration budget ran out before 2^n distinct words were collected.
    """

    def __init__(self, count: int, required: int, iterations: int):
        self.count = count
        self.required = required
        self.iterations = iterations
        super().__init__(
            f"InsufficientBlocks: collected {count}/{required} distinct words "
            f"after {iterations} iterations; increase M or adjust (β,x₀,C)"
        )


class GeneratorStallError(ChaosSBoxError):
    """The gate was never hit often enough to draw the requested samples."""
