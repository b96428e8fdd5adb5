# src/chaos_sbox/config.py
from __future__ import annotations

from pathlib import Path
from types import SimpleNamespace
from typing import Any, Mapping, Optional
from dotenv import load_dotenv
import json
import yaml
import logging
import os

# Load .env as early as possible
load_dotenv()

BASE_DIR = Path(__file__).resolve().parent
SCHEMA_DIR = BASE_DIR / "schemas"
DEFAULTS_PATH = SCHEMA_DIR / "defaults.yaml"
REFERENCE_PATH = SCHEMA_DIR / "reference_instance.json"


def load_json(path: Path):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def load_yaml(path: Path):
    with open(path, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


def _section(raw: Optional[Mapping[str, Any]]) -> SimpleNamespace:
    return SimpleNamespace(**dict(raw or {}))


class SBoxConfig:
    """
    Shipped defaults for generation, latency modelling and analysis.

    Sections are exposed as attribute namespaces, e.g. ``cfg.generation.beta``.
    The raw mappings are kept under ``cfg.raw`` for serialization.
    """

    def __init__(self, raw: Mapping[str, Any], reference: Mapping[str, Any]):
        self.raw = dict(raw)
        self.generation = _section(raw.get("generation"))
        self.latency = _section(raw.get("latency"))
        self.uniformity = _section(raw.get("uniformity"))
        self.analysis = _section(raw.get("analysis"))
        self.reference_instance = dict(reference)


def load_config(path: Optional[str | Path] = None) -> SBoxConfig:
    """
    Read defaults.yaml, or the file named by ``path`` / $CHAOS_SBOX_CONFIG.
    """
    chosen = path or os.getenv("CHAOS_SBOX_CONFIG") or DEFAULTS_PATH
    return SBoxConfig(load_yaml(Path(chosen)), load_json(REFERENCE_PATH))


def setup_logging(level: Optional[str] = None) -> None:
    """
    Configure root logger. Safe to call multiple times.
    """
    level = level or os.getenv("CHAOS_SBOX_LOG_LEVEL", "INFO")
    numeric_level = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(
        level=numeric_level,
        format="%(asctime)s | %(levelname)s | %(name)s | %(message)s",
    )
    logging.getLogger().setLevel(numeric_level)


# Run once automatically
setup_logging()
