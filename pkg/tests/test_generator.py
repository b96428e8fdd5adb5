# tests/test_generator.py
from itertools import islice
from statistics import mean, median

import numpy as np
import pytest

from chaos_sbox.analysis.report import analyze
from chaos_sbox.core.errors import ConfigurationError, InsufficientBlocksError
from chaos_sbox.core.types import (
    DyadicSet,
    FixedPointState,
    GenerationParams,
    Mixer,
    MixerKind,
    Stride,
)
from chaos_sbox.dynamics.fixedpoint import orbit_stream, parse_beta, parse_fraction
from chaos_sbox.generation.generator import generate, iter_gated_words, params_to_dict
from chaos_sbox.generation.tables import rotl

B = 64
DEFAULT_GATE = DyadicSet.from_indices(3, [5])
FULL = DyadicSet.full()


def make_params(beta="phi256", x0="0.3", gate=DEFAULT_GATE, **kw):
    return GenerationParams(
        beta=parse_beta(beta, B),
        seed_x0=parse_fraction(x0, B),
        gate=gate,
        **kw,
    )


def test_defaults_give_a_permutation():
    table = generate(make_params())
    assert table.n == 8
    assert sorted(table.table) == list(range(256))
    trace = table.gen_trace
    assert trace.acceptances == trace.distinct + trace.duplicates
    assert trace.distinct == 256
    assert trace.iterations <= 1_000_000


def test_generation_is_deterministic():
    for params in (make_params(), make_params(stride=Stride.SKIP_AFTER_ACCEPT)):
        runs = [generate(params) for _ in range(3)]
        assert runs[0].table == runs[1].table == runs[2].table
        assert runs[0].gen_trace == runs[1].gen_trace == runs[2].gen_trace


def test_growth_curve_tracks_first_appearances():
    trace = generate(make_params()).gen_trace
    assert len(trace.growth) == 256
    assert list(trace.growth) == sorted(set(trace.growth))
    # the last window starts d = 1 step after the gate and spans n = 8 bits
    assert trace.growth[-1] == trace.iterations - 9


def test_two_bit_words_fill_quickly():
    table = generate(make_params(gate=FULL, word_size=2, budget=1000))
    assert sorted(table.table) == [0, 1, 2, 3]
    assert table.gen_trace.iterations < 100


def test_full_gate_accepts_every_step():
    trace = generate(make_params(gate=FULL)).gen_trace
    assert trace.iterations == trace.acceptances + 8


def test_iterations_count_the_final_window():
    for offset in (1, 2, 3):
        trace = generate(make_params(window_offset=offset)).gen_trace
        assert trace.iterations == trace.growth[-1] + offset + 8
    skip = generate(make_params(stride=Stride.SKIP_AFTER_ACCEPT)).gen_trace
    assert skip.iterations == skip.growth[-1] + 9


def test_failed_run_reports_the_whole_budget():
    with pytest.raises(InsufficientBlocksError) as info:
        generate(make_params(x0="0", budget=10_000))
    assert info.value.iterations == 10_000


def test_zero_seed_collects_only_the_zero_word():
    with pytest.raises(InsufficientBlocksError) as info:
        generate(make_params(x0="0", gate=FULL, budget=10_000))
    assert info.value.count == 1
    assert "InsufficientBlocks" in str(info.value)
    assert "increase M or adjust" in str(info.value)


def test_zero_seed_outside_gate_collects_nothing():
    with pytest.raises(InsufficientBlocksError) as info:
        generate(make_params(x0="0", budget=10_000))
    assert info.value.count == 0


def test_golden_ratio_reaches_only_fibonacci_many_words():
    # no "11" in any golden-ratio expansion: F(10) = 55 admissible bytes
    with pytest.raises(InsufficientBlocksError) as info:
        generate(make_params(beta="phi", gate=FULL, budget=200_000))
    assert info.value.count == 55


def test_zero_offset_pins_the_leading_bit():
    params = make_params(window_offset=0, budget=200_000)
    words = [w for _, w in islice(iter_gated_words(params), 2000)]
    assert all(w & 1 for w in words)
    with pytest.raises(InsufficientBlocksError) as info:
        generate(params)
    assert info.value.count <= 128


# ----------------------------------------------------------
# Gated word stream
# ----------------------------------------------------------

def test_words_pack_lsb_first_after_offset():
    params = make_params(gate=FULL, window_offset=1)
    bits = [s.bit for s in orbit_stream(params, 40)]
    words = [w for _, w in islice(iter_gated_words(params), 5)]
    for tau, word in enumerate(words):
        assert word == sum(bits[tau + 1 + j] << j for j in range(8))


def test_gate_times_match_the_gate():
    params = make_params()
    orbit = [s.state_before for s in orbit_stream(params, 3000)]
    taus = [tau for tau, _ in islice(iter_gated_words(params), 100)]
    assert taus == sorted(taus)
    for tau in taus:
        assert orbit[tau].frac >> (B - 3) == 5


def test_skip_stride_does_not_overlap_windows():
    params = make_params(stride=Stride.SKIP_AFTER_ACCEPT)
    taus = [tau for tau, _ in islice(iter_gated_words(params), 500)]
    assert all(b - a >= 9 for a, b in zip(taus, taus[1:]))


def test_stream_stays_inside_budget():
    params = make_params(gate=FULL, budget=5000)
    taus = [tau for tau, _ in iter_gated_words(params)]
    assert taus[-1] == 5000 - 8 - 1 - 1
    assert len(taus) == 5000 - 9


# ----------------------------------------------------------
# Mixer and parameter checks
# ----------------------------------------------------------

def test_xor_rotate_mixer_permutes_indices():
    plain = generate(make_params())
    mixer = Mixer(MixerKind.XOR_ROTATE, 0x1B)
    mixed = generate(make_params(mixer=mixer))
    assert sorted(mixed.table) == sorted(plain.table)
    for x in range(256):
        assert mixed.table[x] == plain.table[rotl(x, 1, 8) ^ 0x1B]
    assert mixed.provenance["mixer"] == "xor-rotate:0x1b"


@pytest.mark.parametrize(
    "kw",
    [
        {"budget": 2047},
        {"word_size": 17},
        {"word_size": 0},
        {"window_offset": -1},
        {"mixer": Mixer(MixerKind.XOR_ROTATE, 256)},
    ],
)
def test_invalid_params(kw):
    with pytest.raises(ConfigurationError):
        make_params(**kw)


def test_width_mismatch_rejected():
    with pytest.raises(ConfigurationError):
        GenerationParams(
            beta=parse_beta("phi256", 64),
            seed_x0=parse_fraction("0.3", 32),
            gate=DEFAULT_GATE,
        )


def test_provenance_records_parameters():
    record = params_to_dict(make_params())
    assert record["source"] == "beta-orbit"
    assert record["beta"]["int_part"] == 414
    assert record["gate"] == "3:5"
    assert record["window_offset"] == 1
    assert record["stride"] == "overlapping"


# ----------------------------------------------------------
# Acceptance run over many seeds
# ----------------------------------------------------------

@pytest.mark.slow
def test_hundred_random_seeds():
    rng = np.random.default_rng(7)
    seeds = [int(v) * 2 + 1 for v in rng.integers(1, 2**62, size=100)]

    acceptances, avg_nl, ddt_max, degrees = [], [], [], []
    for frac in seeds:
        params = make_params()
        params = GenerationParams(
            beta=params.beta,
            seed_x0=FixedPointState(frac, B),
            gate=params.gate,
        )
        table = generate(params)
        assert table.is_bijective()
        report = analyze(table)
        acceptances.append(table.gen_trace.acceptances)
        avg_nl.append(report.avg_nl)
        ddt_max.append(report.ddt_max)
        degrees.extend(report.per_bit_degree)

    assert 1450 <= mean(acceptances) <= 1750
    assert 1380 <= median(acceptances) <= 1700
    assert 98 <= median(avg_nl) <= 106
    assert 8 <= median(ddt_max) <= 12
    assert sum(d == 7 for d in degrees) >= 0.95 * len(degrees)
