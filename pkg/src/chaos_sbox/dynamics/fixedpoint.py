# src/chaos_sbox/dynamics/fixedpoint.py
from __future__ import annotations

import logging
from decimal import Decimal, InvalidOperation, localcontext
from typing import Iterator, Optional, Tuple

from chaos_sbox.core.errors import ConfigurationError
from chaos_sbox.core.types import (
    BetaValue,
    FixedPointState,
    GenerationParams,
    OrbitSample,
)

logger = logging.getLogger(__name__)

# Enough decimal digits to truncate exactly at B = 128 with a 9-bit integer part.
_PRECISION = 90

_PI = (
    "3.14159265358979323846264338327950288419716939937510"
    "58209749445923078164062862089986280348253421170679"
)


def _preset(name: str) -> Optional[Decimal]:
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        phi = (1 + Decimal(5).sqrt()) / 2
        presets = {
            "phi": phi,
            "golden": phi,
            "silver": 1 + Decimal(2).sqrt(),
            "pi": Decimal(_PI),
            "phi256": 256 * phi,
        }
        return presets.get(name.strip().lower())


# ======================================================================
# Parsing (decimal strings and presets -> B-bit truncations)
# ======================================================================

def _to_decimal(text: str) -> Decimal:
    preset = _preset(text)
    if preset is not None:
        return preset
    try:
        value = Decimal(text.strip())
    except (InvalidOperation, AttributeError) as exc:
        raise ConfigurationError(f"not a decimal number or preset: {text!r}") from exc
    if not value.is_finite():
        raise ConfigurationError(f"not a finite number: {text!r}")
    return value


def _truncate(value: Decimal, width: int) -> int:
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        return int((value * (1 << width)).to_integral_value(rounding="ROUND_FLOOR"))


def parse_fraction(text: str, width: int = 64) -> FixedPointState:
    """
    "0.3" -> FixedPointState(floor(0.3 * 2^B), B).
    """
    value = _to_decimal(text)
    if not 0 <= value < 1:
        raise ConfigurationError(f"seed must lie in [0, 1): {text!r}")
    return FixedPointState(frac=_truncate(value, width), width=width)


def parse_beta(text: str, width: int = 64) -> BetaValue:
    """
    Preset name (phi, silver, pi, phi256) or decimal literal -> floor(beta * 2^B) / 2^B.
    """
    value = _to_decimal(text)
    if value <= 1:
        raise ConfigurationError(f"beta must be > 1: {text!r}")
    scaled = _truncate(value, width)
    return BetaValue(
        int_part=scaled >> width,
        frac_part=scaled & ((1 << width) - 1),
        width=width,
    )


# ======================================================================
# The map
# ======================================================================

def beta_step(state: FixedPointState, beta: BetaValue) -> Tuple[FixedPointState, int]:
    """
    One application of T(x) = beta*x mod 1.

    The full product floor(beta*2^B) * frac is formed exactly; the carried-out
    integer part is the digit and the fractional part is truncated to B bits.
    """
    if state.width != beta.width:
        raise ConfigurationError(
            f"width mismatch: state has B={state.width}, beta has B={beta.width}"
        )
    width = state.width
    product = beta.scaled * state.frac
    digit = product >> (2 * width)
    nxt = (product >> width) & ((1 << width) - 1)
    return FixedPointState(frac=nxt, width=width), digit


def threshold_bit(digit: int, beta: BetaValue) -> int:
    """0 if digit < floor(beta)/2, else 1 (compared as 2*digit < floor(beta))."""
    return 0 if 2 * digit < beta.int_part else 1


def iter_orbit(beta: BetaValue, x0: FixedPointState) -> Iterator[Tuple[int, int, int]]:
    """
    Endless orbit as raw integers: (pre-step frac, digit, bit) per step.

    Hot-path twin of ``orbit_stream``; the generator and the statistics run on it.
    """
    if x0.width != beta.width:
        raise ConfigurationError(
            f"width mismatch: state has B={x0.width}, beta has B={beta.width}"
        )
    width = beta.width
    two_b = 2 * width
    mask = (1 << width) - 1
    scaled = beta.scaled
    floor_beta = beta.int_part
    x = x0.frac
    while True:
        product = scaled * x
        digit = product >> two_b
        yield x, digit, (0 if 2 * digit < floor_beta else 1)
        x = (product >> width) & mask


def orbit_stream(params: GenerationParams, length: int) -> Iterator[OrbitSample]:
    """
    Samples n = 1..length of the orbit of x0, each with its pre-step state.
    """
    if length < 1:
        raise ConfigurationError("orbit length must be >= 1")
    state = params.seed_x0
    for _ in range(length):
        nxt, digit = beta_step(state, params.beta)
        yield OrbitSample(
            state_before=state,
            state_after=nxt,
            digit=digit,
            bit=threshold_bit(digit, params.beta),
        )
        state = nxt


def detect_period(params: GenerationParams, max_steps: int) -> Optional[int]:
    """
    Brent cycle detection on the finite-precision orbit.

    Returns the period, or None when no cycle closes within ``max_steps`` map
    evaluations.
    """
    width = params.width
    mask = (1 << width) - 1
    scaled = params.beta.scaled

    power = lam = 1
    tortoise = params.seed_x0.frac
    hare = ((scaled * tortoise) >> width) & mask
    steps = 1
    while tortoise != hare:
        if steps >= max_steps:
            logger.info("period: no cycle within %d steps", max_steps)
            return None
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = ((scaled * hare) >> width) & mask
        lam += 1
        steps += 1
    logger.info("period: cycle of length %d found after %d steps", lam, steps)
    return lam
