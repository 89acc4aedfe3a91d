"""Tests for configuration loading."""

import pytest

from pathlike.errors import ConfigError
from pathlike.settings import Settings, load_settings


def write_config(tmp_path, text):
    path = tmp_path / "pathlike.env"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_defaults_without_file():
    """Test that no path gives the built-in defaults."""
    settings = load_settings()
    assert settings == Settings()
    assert settings.seed == 0xC0FFEE
    assert settings.max_terms == 500


def test_file_values_override_defaults(tmp_path):
    """Test typed parsing of ints, hex ints and floats."""
    path = write_config(
        tmp_path,
        "# numerical defaults\n"
        "PATHLIKE_MAX_TERMS=800\n"
        "PATHLIKE_SEED=0x10\n"
        "PATHLIKE_REL_TOL=1e-12\n"
        "PATHLIKE_MC_SAMPLES=1000\n",
    )
    settings = load_settings(path)
    assert settings.max_terms == 800
    assert settings.seed == 16
    assert settings.rel_tol == 1e-12
    assert settings.mc_samples == 1000
    assert settings.workers == 1


def test_unknown_key(tmp_path):
    """Test that keys outside the PATHLIKE_ namespace are rejected."""
    path = write_config(tmp_path, "LD_API_KEY=abc\n")
    with pytest.raises(ConfigError, match="Unknown config key 'LD_API_KEY'"):
        load_settings(path)
    path = write_config(tmp_path, "PATHLIKE_COLOUR=blue\n")
    with pytest.raises(ConfigError, match="Unknown config key"):
        load_settings(path)


def test_malformed_value(tmp_path):
    """Test that non-numeric values are rejected."""
    path = write_config(tmp_path, "PATHLIKE_MAX_TERMS=lots\n")
    with pytest.raises(ConfigError, match="malformed value"):
        load_settings(path)


def test_missing_value(tmp_path):
    """Test a key without '='."""
    path = write_config(tmp_path, "PATHLIKE_SEED\n")
    with pytest.raises(ConfigError, match="has no value"):
        load_settings(path)


def test_missing_file(tmp_path):
    """Test an unreadable config path."""
    with pytest.raises(ConfigError, match="Cannot read config file"):
        load_settings(str(tmp_path / "absent.env"))


def test_environment_is_ignored(tmp_path, monkeypatch):
    """Test that only the file is consulted."""
    monkeypatch.setenv("PATHLIKE_MAX_TERMS", "7")
    path = write_config(tmp_path, "PATHLIKE_WORKERS=2\n")
    settings = load_settings(path)
    assert settings.max_terms == 500
    assert settings.workers == 2


def test_override_skips_none():
    """Test command-line overrides on top of file values."""
    settings = Settings().override(seed=5, workers=None, mc_samples=100)
    assert settings.seed == 5
    assert settings.workers == 1
    assert settings.mc_samples == 100


def test_derived_policies():
    """Test the series policy and Monte-Carlo config built from settings."""
    settings = Settings(max_terms=42, mc_samples=300, mc_chunk=100, workers=2, seed=9)
    policy = settings.series_policy()
    assert policy.max_terms == 42
    mc = settings.mc_config()
    assert (mc.samples, mc.chunk, mc.workers, mc.seed) == (300, 100, 2, 9)
    assert mc.chunk_sizes() == [100, 100, 100]
