# src/chaos_sbox/cli/run.py

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Sequence

from chaos_sbox.config import load_config, setup_logging
from chaos_sbox.core.errors import (
    ConfigurationError,
    GeneratorStallError,
    InsufficientBlocksError,
    NonBijectiveError,
    TableFormatError,
)
from chaos_sbox.core.types import SBoxTable
from chaos_sbox.generation.generator import generate
from chaos_sbox.generation.tables import gf_baseline_sbox, identity_sbox, invert
from chaos_sbox.pipeline.io_utils import (
    FRAME_FORMATS,
    TABLE_FORMATS,
    guess_format,
    read_sbox,
    render_frame,
    report_to_json,
    save_report_histograms,
    table_to_hex,
    table_to_json,
    write_sbox,
    write_text,
)
from chaos_sbox.pipeline.pipeline import SBoxPipeline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GENERATION = 3
EXIT_FORMAT = 4


class UsageError(Exception):
    """Flag combination argparse cannot reject on its own."""


def resolve_format(
    explicit: Optional[str],
    out: Optional[str],
    allowed: Sequence[str],
    default: str,
) -> str:
    """
    --format wins, else the output suffix, else ``default``; a suffix that
    names a different known format is a usage error.
    """
    guessed = guess_format(out) if out else None
    if explicit:
        if guessed and guessed != explicit:
            raise UsageError(f"--format {explicit} conflicts with output file {out}")
        return explicit
    if guessed in allowed:
        return guessed
    if guessed:
        raise UsageError(f"output file {out} implies {guessed}, expected one of {list(allowed)}")
    return default


def _int_list(text: str) -> List[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


# ======================================================================
# Shared flags
# ======================================================================

def _add_generation_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("generation parameters (default: defaults.yaml)")
    g.add_argument("--beta", help="preset (phi, silver, pi, phi256) or decimal > 1")
    g.add_argument("--x0", help="seed in [0, 1) as a decimal string")
    g.add_argument("--gate", help="dyadic gate 'k:j0,j1,...', e.g. 3:5")
    g.add_argument("--n", dest="word_size", type=int, help="word size in bits")
    g.add_argument("--width", type=int, help="fractional width B")
    g.add_argument("--budget", type=int, help="max orbit iterations M")
    g.add_argument("--mixer", help="identity | xor-rotate:<const>")
    g.add_argument("--stride", choices=["overlapping", "skip"])
    g.add_argument("--offset", dest="window_offset", type=int, help="window offset d")


def _add_latency_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("latency model (default: defaults.yaml)")
    g.add_argument("--k", dest="rank_k", type=int, help="gate rank, p = 2^-k")
    g.add_argument("--trials", type=int)
    g.add_argument("--fclk", dest="f_clk_hz", type=float, help="clock in Hz, e.g. 200e6")
    g.add_argument("--seed", dest="rng_seed", type=int)
    g.add_argument("--c-iter", dest="c_iter", type=int)
    g.add_argument("--c-acc", dest="c_acc", type=int)


def _generation_overrides(args: argparse.Namespace) -> Dict[str, object]:
    keys = ("beta", "x0", "gate", "word_size", "width", "budget", "mixer", "stride", "window_offset")
    return {k: getattr(args, k) for k in keys}


def _latency_overrides(args: argparse.Namespace) -> Dict[str, object]:
    keys = ("rank_k", "trials", "f_clk_hz", "rng_seed", "c_iter", "c_acc")
    return {k: getattr(args, k, None) for k in keys}


# ======================================================================
# Subcommands
# ======================================================================

def _emit_table(table: SBoxTable, out: Optional[str], fmt: str) -> None:
    if out:
        write_sbox(table, out, fmt)
    else:
        write_text(table_to_hex(table) if fmt == "hex" else table_to_json(table), None)


def cmd_generate(args: argparse.Namespace, pipeline: SBoxPipeline) -> int:
    fmt = resolve_format(args.format, args.out, TABLE_FORMATS, "hex")
    params = pipeline.build_params(**_generation_overrides(args))
    table = generate(params)
    _emit_table(table, args.out, fmt)
    trace = table.gen_trace
    print(
        f"iterations={trace.iterations} acceptances={trace.acceptances} "
        f"duplicates={trace.duplicates} bijective={table.is_bijective()}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace, pipeline: SBoxPipeline) -> int:
    if bool(args.table) == bool(args.baseline):
        raise UsageError("give either a table file or --baseline, not both")
    if args.baseline == "gf":
        table = gf_baseline_sbox()
    elif args.baseline == "identity":
        table = identity_sbox(8)
    else:
        table = read_sbox(args.table, require_bijective=args.require_bijective)

    params = None
    if args.uniformity:
        params = pipeline.build_params(**_generation_overrides(args))
    report = pipeline.analyze(table, params, uniformity_samples=args.samples)

    write_text(report_to_json(report, {"provenance": table.provenance}), args.out)
    if args.hist_dir:
        paths = save_report_histograms(report, args.hist_dir)
        logger.info("cli: histograms written to %s", ", ".join(str(p) for p in paths.values()))
    return EXIT_OK


def cmd_latency(args: argparse.Namespace, pipeline: SBoxPipeline) -> int:
    fmt = resolve_format(args.format, args.out, FRAME_FORMATS, "text")
    config = pipeline.build_latency_config(**_latency_overrides(args))
    real_params = pipeline.build_params(**_generation_overrides(args)) if args.real else None
    frame, within_budget = pipeline.latency_table(
        config,
        n=args.n_coupons,
        real_params=real_params,
        real_trials=args.real_trials,
    )
    write_text(render_frame(frame, fmt), args.out)
    print(
        f"P95 below {pipeline.cfg.latency.budget_us:g} us: {'yes' if within_budget else 'NO'}",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, pipeline: SBoxPipeline) -> int:
    fmt = resolve_format(args.format, args.out, FRAME_FORMATS, "text")
    params = pipeline.build_params(**_generation_overrides(args))
    frame = pipeline.compare(params, context=not args.no_context)
    write_text(render_frame(frame, fmt), args.out)
    return EXIT_OK


def cmd_invert(args: argparse.Namespace, pipeline: SBoxPipeline) -> int:
    fmt = resolve_format(args.format, args.out, TABLE_FORMATS, "hex")
    table = read_sbox(args.table, require_bijective=True)
    _emit_table(invert(table), args.out, fmt)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, pipeline: SBoxPipeline) -> int:
    fmt = resolve_format(args.format, args.out, FRAME_FORMATS, "text")
    config = pipeline.build_latency_config(**_latency_overrides(args))
    overrides = _generation_overrides(args)
    overrides.pop("width")
    frame = pipeline.sweep(
        args.ranks,
        args.widths,
        config,
        real_trials=args.real_trials,
        **overrides,
    )
    write_text(render_frame(frame, fmt), args.out)
    return EXIT_OK


# ======================================================================
# Parser
# ======================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaos-sbox",
        description="Chaos-based S-box generation, cryptanalysis and latency modelling.",
    )
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING ... (default: $CHAOS_SBOX_LOG_LEVEL or INFO)")
    parser.add_argument("--config", help="alternative defaults YAML")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a bijective S-box from the gated orbit")
    _add_generation_flags(p)
    p.add_argument("--out", "-o", help="output table file (default: stdout)")
    p.add_argument("--format", choices=TABLE_FORMATS)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("analyze", help="metric suite for a table file or built-in baseline")
    p.add_argument("table", nargs="?", help="hex or JSON table file")
    p.add_argument("--baseline", choices=["gf", "identity"])
    p.add_argument("--require-bijective", action="store_true")
    p.add_argument("--uniformity", action="store_true", help="also chi-square the gated word stream")
    p.add_argument("--samples", type=int, help="uniformity sample count")
    p.add_argument("--hist-dir", help="write ddt.csv and lat.csv here")
    p.add_argument("--out", "-o", help="report JSON (default: stdout)")
    _add_generation_flags(p)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("latency", help="model, Monte Carlo and baseline latencies")
    _add_latency_flags(p)
    p.add_argument("--coupons", dest="n_coupons", type=int, default=8, help="word size n of the modelled table")
    p.add_argument("--real", action="store_true", help="also time the actual generator")
    p.add_argument("--real-trials", type=int)
    _add_generation_flags(p)
    p.add_argument("--out", "-o")
    p.add_argument("--format", choices=FRAME_FORMATS)
    p.set_defaults(handler=cmd_latency)

    p = sub.add_parser("compare", help="generated table vs GF baseline vs published instance")
    _add_generation_flags(p)
    p.add_argument("--no-context", action="store_true", help="omit the reference bound rows")
    p.add_argument("--out", "-o")
    p.add_argument("--format", choices=FRAME_FORMATS)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("invert", help="write the inverse of a bijective table")
    p.add_argument("table")
    p.add_argument("--out", "-o")
    p.add_argument("--format", choices=TABLE_FORMATS)
    p.set_defaults(handler=cmd_invert)

    p = sub.add_parser("sweep", help="latency and quality over (k, B) operating points")
    _add_generation_flags(p)
    _add_latency_flags(p)
    p.add_argument("--ranks", type=_int_list, default=[2, 3, 4])
    p.add_argument("--widths", type=_int_list, default=[32, 64])
    p.add_argument("--real-trials", type=int)
    p.add_argument("--out", "-o")
    p.add_argument("--format", choices=FRAME_FORMATS)
    p.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (None, 0) else EXIT_USAGE

    if args.log_level:
        setup_logging(args.log_level)

    handler: Callable[[argparse.Namespace, SBoxPipeline], int] = args.handler
    try:
        pipeline = SBoxPipeline(load_config(args.config))
        return handler(args, pipeline)
    except (UsageError, ConfigurationError) as exc:
        logger.error("cli: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InsufficientBlocksError, GeneratorStallError) as exc:
        logger.error("cli: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except (TableFormatError, NonBijectiveError, OSError) as exc:
        logger.error("cli: %s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
