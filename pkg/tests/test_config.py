import logging

from src.utils.config import (
    DEFAULT_CONFIG, get_sweep_workers, is_audit_enabled, is_progress_enabled, load_config,
)


def test_defaults_without_file():
    config = load_config(None)
    assert config == DEFAULT_CONFIG


def test_missing_file_falls_back_to_defaults(tmp_path):
    assert load_config(str(tmp_path / "absent.yml")) == DEFAULT_CONFIG


def test_file_values_override_defaults(tmp_path, caplog):
    path = tmp_path / "config.yml"
    path.write_text("closure_tolerance: 1.0e-6\nsweep_workers: 2\nomega2_sign: 5\nflavour: mint\n")
    with caplog.at_level(logging.WARNING):
        config = load_config(str(path))
    assert config["closure_tolerance"] == 1e-6
    assert config["sweep_workers"] == 2
    assert config["omega2_sign"] == 1
    assert "flavour" not in config
    assert "flavour" in caplog.text


def test_empty_file_is_defaults(tmp_path):
    path = tmp_path / "config.yml"
    path.write_text("")
    assert load_config(str(path)) == DEFAULT_CONFIG


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("GEOPHASE_LOG_LEVEL", "debug")
    monkeypatch.setenv("GEOPHASE_SWEEP_WORKERS", "0")
    monkeypatch.setenv("GEOPHASE_PROGRESS", "off")
    monkeypatch.setenv("GEOPHASE_AUDIT", "yes")
    config = load_config(None)
    assert config["log_level"] == "DEBUG"
    assert config["sweep_workers"] == 1
    assert config["progress_bar"] is False
    assert config["audit"] is True


def test_env_getters_defaults():
    assert get_sweep_workers(3) == 3
    assert is_progress_enabled() is True
    assert is_audit_enabled() is False
