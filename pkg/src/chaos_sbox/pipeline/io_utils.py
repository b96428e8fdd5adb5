# src/chaos_sbox/pipeline/io_utils.py
from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import pandas as pd

from chaos_sbox.analysis.report import report_to_dict
from chaos_sbox.core.errors import NonBijectiveError, TableFormatError
from chaos_sbox.core.types import CryptoReport, GenTrace, SBoxTable

logger = logging.getLogger(__name__)

HEX_PER_ROW = 16
TABLE_FORMATS = ("hex", "json")
FRAME_FORMATS = ("text", "csv", "json")


def _ensure_parent(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)


def guess_format(path: str | Path) -> Optional[str]:
    suffix = Path(path).suffix.lower().lstrip(".")
    return {"hex": "hex", "txt": "text", "json": "json", "csv": "csv"}.get(suffix)


# ======================================================================
# S-box tables: hex grid
# ======================================================================

def table_to_hex(table: SBoxTable) -> str:
    """
    Rows of 16 uppercase entries, row r column c = S(16r + c).
    """
    digits = max(1, -(-table.n // 4))
    cells = [f"{v:0{digits}X}" for v in table.table]
    rows = [
        " ".join(cells[i : i + HEX_PER_ROW])
        for i in range(0, len(cells), HEX_PER_ROW)
    ]
    return "\n".join(rows) + "\n"


def table_from_hex(text: str) -> SBoxTable:
    tokens = text.split()
    count = len(tokens)
    if count < 2 or count & (count - 1):
        raise TableFormatError(f"hex table has {count} entries, expected a power of two")
    try:
        values = tuple(int(tok, 16) for tok in tokens)
    except ValueError as exc:
        raise TableFormatError(f"hex table holds a non-hex entry: {exc}") from exc
    return SBoxTable(
        n=count.bit_length() - 1,
        table=values,
        provenance={"source": "file"},
    )


# ======================================================================
# S-box tables: JSON
# ======================================================================

def _trace_to_dict(trace: GenTrace) -> Dict[str, Any]:
    return {
        "iterations": trace.iterations,
        "acceptances": trace.acceptances,
        "duplicates": trace.duplicates,
        "growth": list(trace.growth),
    }


def table_to_json(table: SBoxTable) -> str:
    data: Dict[str, Any] = {
        "n": table.n,
        "table": list(table.table),
        "provenance": table.provenance,
    }
    if table.gen_trace is not None:
        data["gen_trace"] = _trace_to_dict(table.gen_trace)
    return json.dumps(data, ensure_ascii=False) + "\n"


def table_from_json(text: str) -> SBoxTable:
    try:
        data = json.loads(text)
        n = int(data["n"])
        values = tuple(int(v) for v in data["table"])
        provenance = dict(data.get("provenance") or {"source": "file"})
        raw_trace = data.get("gen_trace")
        trace = None
        if raw_trace is not None:
            trace = GenTrace(
                iterations=int(raw_trace["iterations"]),
                acceptances=int(raw_trace["acceptances"]),
                duplicates=int(raw_trace["duplicates"]),
                growth=tuple(int(t) for t in raw_trace.get("growth", [])),
            )
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise TableFormatError(f"malformed JSON table: {exc}") from exc
    return SBoxTable(n=n, table=values, provenance=provenance, gen_trace=trace)


# ----------------------------------------------------------
# File level
# ----------------------------------------------------------

def read_sbox(path: str | Path, *, require_bijective: bool = False) -> SBoxTable:
    """
    Read a hex-grid or JSON table; JSON is recognised by suffix or a leading '{'.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if guess_format(path) == "json" or text.lstrip().startswith("{"):
        table = table_from_json(text)
    else:
        table = table_from_hex(text)
    if require_bijective and not table.is_bijective():
        raise NonBijectiveError(f"{path}: table is not a permutation")
    logger.info("io: read %d-bit table from %s", table.n, path)
    return table


def write_sbox(table: SBoxTable, path: str | Path, fmt: str = "hex") -> Path:
    if fmt not in TABLE_FORMATS:
        raise TableFormatError(f"unknown table format {fmt!r}")
    path = Path(path)
    _ensure_parent(path)
    payload = table_to_hex(table) if fmt == "hex" else table_to_json(table)
    path.write_text(payload, encoding="utf-8")
    logger.info("io: wrote %s table to %s", fmt, path)
    return path


# ======================================================================
# Reports and histograms
# ======================================================================

def report_to_json(report: CryptoReport, extra: Optional[Mapping[str, Any]] = None) -> str:
    data = report_to_dict(report)
    if extra:
        data.update(extra)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def save_histogram_csv(histogram: Mapping[int, int], out_path: str | Path, key: str) -> Path:
    """
    Two-column CSV (``key``,count), rows sorted by key.
    """
    path = Path(out_path)
    _ensure_parent(path)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow([key, "count"])
        for value, count in sorted(histogram.items()):
            writer.writerow([value, count])
    return path


def save_report_histograms(report: CryptoReport, out_dir: str | Path) -> Dict[str, Path]:
    out_dir = Path(out_dir)
    return {
        "ddt": save_histogram_csv(report.ddt_histogram, out_dir / "ddt.csv", "value"),
        "lat": save_histogram_csv(report.lat_histogram, out_dir / "lat.csv", "abs_bias"),
    }


# ======================================================================
# Tabular results (latency, compare, sweep)
# ======================================================================

def render_frame(frame: pd.DataFrame, fmt: str) -> str:
    if fmt == "text":
        return frame.to_string(index=False, na_rep="-") + "\n"
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\n")
    if fmt == "json":
        return frame.to_json(orient="records", indent=2) + "\n"
    raise TableFormatError(f"unknown output format {fmt!r}")


def write_text(payload: str, out_path: Optional[str | Path]) -> Optional[Path]:
    """Write to ``out_path``, or print when no path is given."""
    if out_path is None:
        print(payload, end="")
        return None
    path = Path(out_path)
    _ensure_parent(path)
    path.write_text(payload, encoding="utf-8")
    logger.info("io: wrote %s", path)
    return path
