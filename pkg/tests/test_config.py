# tests/test_config.py
import logging
import os
from unittest.mock import patch

from chaos_sbox.config import DEFAULTS_PATH, load_config, setup_logging


def test_shipped_defaults():
    cfg = load_config()
    assert cfg.generation.beta == "phi256"
    assert cfg.generation.gate == "3:5"
    assert cfg.generation.window_offset == 1
    assert cfg.latency.f_clk_hz == 200e6
    assert cfg.uniformity.confidence == 0.999
    assert cfg.reference_instance["avg_nl"] == 102.5
    assert cfg.reference_instance["ddt_histogram"] == {"10": 11, "8": 94, "6": 830}


def test_config_path_from_environment(tmp_path):
    custom = tmp_path / "custom.yaml"
    custom.write_text(
        DEFAULTS_PATH.read_text(encoding="utf-8").replace('x0: "0.3"', 'x0: "0.7"'),
        encoding="utf-8",
    )
    with patch.dict(os.environ, {"CHAOS_SBOX_CONFIG": str(custom)}):
        cfg = load_config()
    assert cfg.generation.x0 == "0.7"


def test_setup_logging_level():
    setup_logging("WARNING")
    assert logging.getLogger().level == logging.WARNING
    with patch.dict(os.environ, {"CHAOS_SBOX_LOG_LEVEL": "DEBUG"}):
        setup_logging()
    assert logging.getLogger().level == logging.DEBUG
    setup_logging("INFO")
