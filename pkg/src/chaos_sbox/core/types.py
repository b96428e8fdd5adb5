# src/chaos_sbox/core/types.py

from __future__ import annotations

from dataclasses import dataclass, field
try:
    from enum import StrEnum
except ImportError:  # Python < 3.11: equivalent of the stdlib StrEnum
    from enum import Enum

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from chaos_sbox.core.errors import ConfigurationError, TableFormatError

MIN_WIDTH = 16
MAX_WIDTH = 128
MAX_RANK = 16
MAX_WORD_SIZE = 16


# ----------------------------------------------------------
# Fixed-point orbit values
# ----------------------------------------------------------

@dataclass(frozen=True)
class FixedPointState:
    """
    A point x in [0, 1) stored as an unsigned B-bit fraction: x = frac / 2^B.
    """
    frac: int
    width: int = 64

    def __post_init__(self) -> None:
        if not MIN_WIDTH <= self.width <= MAX_WIDTH:
            raise ConfigurationError(
                f"fractional width B={self.width} outside [{MIN_WIDTH}, {MAX_WIDTH}]"
            )
        if not 0 <= self.frac < (1 << self.width):
            raise ConfigurationError(f"frac={self.frac} does not fit in {self.width} bits")

    @property
    def value(self) -> float:
        return self.frac / (1 << self.width)

    def as_fraction(self) -> Fraction:
        return Fraction(self.frac, 1 << self.width)


@dataclass(frozen=True)
class BetaValue:
    """
    beta = int_part + frac_part / 2^B, the B-bit truncation of the real base.
    """
    int_part: int
    frac_part: int
    width: int = 64

    def __post_init__(self) -> None:
        if not MIN_WIDTH <= self.width <= MAX_WIDTH:
            raise ConfigurationError(
                f"fractional width B={self.width} outside [{MIN_WIDTH}, {MAX_WIDTH}]"
            )
        if self.int_part < 1 or (self.int_part == 1 and self.frac_part == 0):
            raise ConfigurationError("beta must be strictly greater than 1")
        if not 0 <= self.frac_part < (1 << self.width):
            raise ConfigurationError(f"frac_part does not fit in {self.width} bits")

    @property
    def scaled(self) -> int:
        """floor(beta * 2^B) as a single integer."""
        return (self.int_part << self.width) | self.frac_part

    @property
    def value(self) -> float:
        return self.int_part + self.frac_part / (1 << self.width)

    def as_fraction(self) -> Fraction:
        return Fraction(self.scaled, 1 << self.width)


@dataclass(frozen=True)
class OrbitSample:
    state_before: FixedPointState
    state_after: FixedPointState
    digit: int
    bit: int


# ----------------------------------------------------------
# Dyadic gate
# ----------------------------------------------------------

@dataclass(frozen=True)
class DyadicSet:
    """
    Union of same-rank dyadic intervals I_{k,j} = [j/2^k, (j+1)/2^k).

    ``members`` is a bitmask over the 2^k interval indices.
    """
    rank: int
    members: int

    def __post_init__(self) -> None:
        if not 0 <= self.rank <= MAX_RANK:
            raise ConfigurationError(f"dyadic rank k={self.rank} outside [0, {MAX_RANK}]")
        if self.members <= 0:
            raise ConfigurationError("dyadic set must contain at least one interval")
        if self.members >> (1 << self.rank):
            raise ConfigurationError(f"interval index out of range for rank {self.rank}")

    @classmethod
    def from_indices(cls, rank: int, indices: List[int] | Tuple[int, ...]) -> "DyadicSet":
        if not 0 <= rank <= MAX_RANK:
            raise ConfigurationError(f"dyadic rank k={rank} outside [0, {MAX_RANK}]")
        mask = 0
        for j in indices:
            if not 0 <= j < (1 << rank):
                raise ConfigurationError(f"interval index {j} out of range for rank {rank}")
            mask |= 1 << j
        return cls(rank=rank, members=mask)

    @classmethod
    def full(cls) -> "DyadicSet":
        return cls(rank=0, members=1)

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(j for j in range(1 << self.rank) if (self.members >> j) & 1)


# ----------------------------------------------------------
# Generation parameters and products
# ----------------------------------------------------------

class Stride(StrEnum):
    OVERLAPPING = "overlapping"
    SKIP_AFTER_ACCEPT = "skip"


class MixerKind(StrEnum):
    IDENTITY = "identity"
    XOR_ROTATE = "xor-rotate"


@dataclass(frozen=True)
class Mixer:
    kind: MixerKind = MixerKind.IDENTITY
    constant: int = 0

    def __str__(self) -> str:
        if self.kind is MixerKind.IDENTITY:
            return "identity"
        return f"xor-rotate:{self.constant:#x}"


@dataclass(frozen=True)
class GenerationParams:
    """
    Inputs of the table generator.

    The extracted word for gate time tau is built from bits
    b[tau + window_offset] ... b[tau + window_offset + n - 1].
    """
    beta: BetaValue
    seed_x0: FixedPointState
    gate: DyadicSet
    word_size: int = 8
    budget: int = 1_000_000
    mixer: Mixer = field(default_factory=Mixer)
    stride: Stride = Stride.OVERLAPPING
    window_offset: int = 1

    def __post_init__(self) -> None:
        if self.beta.width != self.seed_x0.width:
            raise ConfigurationError(
                f"width mismatch: beta has B={self.beta.width}, x0 has B={self.seed_x0.width}"
            )
        n = self.word_size
        if not 1 <= n <= MAX_WORD_SIZE:
            raise ConfigurationError(f"word size n={n} outside [1, {MAX_WORD_SIZE}]")
        if n > self.width:
            raise ConfigurationError("word size exceeds fractional width")
        if self.gate.rank > self.width:
            raise ConfigurationError("gate rank exceeds fractional width")
        if self.budget < n * (1 << n):
            raise ConfigurationError(
                f"budget M={self.budget} below n*2^n={n * (1 << n)}; completion impossible"
            )
        if self.window_offset < 0:
            raise ConfigurationError("window offset must be non-negative")
        if not 0 <= self.mixer.constant < (1 << n):
            raise ConfigurationError(f"mixer constant does not fit in {n} bits")

    @property
    def width(self) -> int:
        return self.beta.width


@dataclass(frozen=True)
class GenTrace:
    # orbit steps consumed, through the last bit of the final window
    iterations: int
    acceptances: int
    duplicates: int
    # gate time tau at which each distinct value was appended
    growth: Tuple[int, ...] = ()

    @property
    def distinct(self) -> int:
        return len(self.growth)


@dataclass(frozen=True)
class SBoxTable:
    n: int
    table: Tuple[int, ...]
    provenance: Dict[str, Any] = field(default_factory=dict, compare=False)
    gen_trace: Optional[GenTrace] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_WORD_SIZE:
            raise TableFormatError(f"word size n={self.n} outside [1, {MAX_WORD_SIZE}]")
        if len(self.table) != (1 << self.n):
            raise TableFormatError(
                f"table has {len(self.table)} entries, expected {1 << self.n}"
            )
        limit = 1 << self.n
        if any(not 0 <= v < limit for v in self.table):
            raise TableFormatError(f"table entry outside [0, {limit})")

    @property
    def size(self) -> int:
        return 1 << self.n

    def is_bijective(self) -> bool:
        return sorted(self.table) == list(range(self.size))


# ----------------------------------------------------------
# Analysis products
# ----------------------------------------------------------

@dataclass
class UniformityResult:
    chi2: float
    dof: int
    samples: int
    passed: bool
    lower: float
    upper: float
    too_regular: bool = False


@dataclass
class CryptoReport:
    n: int
    bijective: bool
    per_bit_nonlinearity: List[int]
    min_nl: int
    avg_nl: float
    component_min_nl: int
    heuristic_nl_bound: float
    ddt_max: int
    ddt_max_prob: Fraction
    ddt_histogram: Dict[int, int]
    lat_max_abs: int
    linear_prob_max: Fraction
    lat_histogram: Dict[int, int]
    per_bit_degree: List[int]
    anf_monomial_counts: List[float]
    uniformity_chi2: Optional[UniformityResult] = None


# ----------------------------------------------------------
# Latency model
# ----------------------------------------------------------

@dataclass(frozen=True)
class LatencyConfig:
    rank_k: int = 3
    c_iter: int = 1
    c_acc: int = 1
    f_clk_hz: float = 200e6
    trials: int = 2000
    rng_seed: int = 2025

    def __post_init__(self) -> None:
        if not 0 <= self.rank_k <= MAX_RANK:
            raise ConfigurationError(f"rank k={self.rank_k} outside [0, {MAX_RANK}]")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")
        if self.f_clk_hz <= 0:
            raise ConfigurationError("clock frequency must be positive")
        if self.c_iter < 1 or self.c_acc < 0:
            raise ConfigurationError("need c_iter >= 1 and c_acc >= 0")
        if not 0 <= self.rng_seed < (1 << 64):
            raise ConfigurationError("rng seed must be an unsigned 64-bit integer")

    @property
    def p(self) -> float:
        return 2.0 ** -self.rank_k


@dataclass(frozen=True)
class LatencyStats:
    source: str
    trials: int
    median_cycles: Optional[float]
    p95_cycles: Optional[float]
    mean_cycles: Optional[float]
    median_us: Optional[float]
    p95_us: Optional[float]
    failures: int = 0
    prng: str = "PCG64"


@dataclass(frozen=True)
class BaselineRow:
    name: str
    cycles: Optional[int]
    microseconds: Optional[float]
    note: str = ""
