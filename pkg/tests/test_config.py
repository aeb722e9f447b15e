"""
Tests for configuration module
"""

import pytest

from src import config
from src.config import (
    DEFAULT_BLEU_EPSILON,
    DEFAULT_KAPPA_THRESHOLD,
    DEFAULT_METEOR_ALPHA,
    DEFAULT_METEOR_BETA,
    DEFAULT_METEOR_GAMMA,
    DEFAULT_ROUGE_BETA,
    PROJECT_ROOT,
    validate_config,
)
from src.errors import ConfigurationError


def test_config_loaded():
    """Test that configuration is loaded correctly"""
    assert PROJECT_ROOT is not None
    assert PROJECT_ROOT.exists()
    assert (PROJECT_ROOT / "src").is_dir()


def test_metric_defaults():
    """Test the documented metric defaults"""
    assert DEFAULT_BLEU_EPSILON == 0.1
    assert (DEFAULT_METEOR_ALPHA, DEFAULT_METEOR_BETA, DEFAULT_METEOR_GAMMA) == (0.9, 3.0, 0.5)
    assert DEFAULT_ROUGE_BETA == 1.2
    assert DEFAULT_KAPPA_THRESHOLD == 0.2


def test_validate_config_accepts_defaults(monkeypatch):
    """Test that the default logging settings validate"""
    monkeypatch.setattr(config, "LOG_LEVEL", "INFO")
    monkeypatch.setattr(config, "LOG_FORMAT", "text")
    assert validate_config() is True


def test_validate_config_rejects_unknown_format(monkeypatch):
    """Test that an unknown LOG_FORMAT is a configuration error"""
    monkeypatch.setattr(config, "LOG_FORMAT", "xml")
    with pytest.raises(ConfigurationError, match="LOG_FORMAT"):
        config.validate_config()


def test_validate_config_rejects_unknown_level(monkeypatch):
    """Test that an unknown LOG_LEVEL is a configuration error"""
    monkeypatch.setattr(config, "LOG_LEVEL", "LOUD")
    with pytest.raises(ConfigurationError, match="LOG_LEVEL"):
        config.validate_config()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
