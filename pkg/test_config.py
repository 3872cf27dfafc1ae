"""
Configuration tests: environment selection, overrides and validation
Run: pytest test_config.py
"""
import pytest

from config import base
from config import Config, DevelopmentConfig, ProductionConfig, TestingConfig, get_config
from spacing_lab.models import McmcParams


@pytest.mark.parametrize("name, expected", [
    ("development", DevelopmentConfig),
    ("production", ProductionConfig),
    ("testing", TestingConfig),
    ("TESTING", TestingConfig),
    ("staging", DevelopmentConfig),
])
def test_get_config(name, expected):
    assert get_config(name) is expected


def test_get_config_reads_environment(monkeypatch):
    monkeypatch.setenv("SPACING_LAB_ENV", "production")
    assert get_config() is ProductionConfig


def test_defaults():
    config = Config()
    assert config.GAUDIN_SMAX == 5.0
    assert config.GAUDIN_STEP == 0.005
    assert config.GAUDIN_ORDER == 40
    assert config.EQUILIBRIUM_NODES == 256
    assert config.EQUILIBRIUM_TOL == 1e-10
    assert config.FIXED_POINT_DAMPING == 0.5
    assert config.KERNEL_MAX_N == 128
    assert config.INTENSITY_MIN_REPLICAS == 50


def test_testing_config_is_quick():
    config = TestingConfig()
    assert config.THREADS == 1
    params = McmcParams.from_config(config)
    assert params.burn_in == 200 and params.thinning == 10


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("GAUDIN_ORDER", "60")
    monkeypatch.setenv("EQUILIBRIUM_TOL", "1e-8")
    assert base._int("GAUDIN_ORDER", 40) == 60
    assert base._float("EQUILIBRIUM_TOL", 1e-10) == 1e-8
    monkeypatch.delenv("GAUDIN_ORDER")
    assert base._int("GAUDIN_ORDER", 40) == 40


def test_validate_reports_problems(caplog, tmp_path):
    class Broken(Config):
        FIXED_POINT_DAMPING = 1.5
        MCMC_TARGET_ACCEPTANCE = 0.0
        GAUDIN_CACHE_DIR = str(tmp_path)

    with caplog.at_level("WARNING"):
        problems = Broken().validate()
    assert len(problems) == 2
    assert "FIXED_POINT_DAMPING" in caplog.text


def test_valid_configuration_has_no_problems(tmp_path):
    class Clean(TestingConfig):
        GAUDIN_CACHE_DIR = str(tmp_path / "cache")

    assert Clean().validate() == []


def test_unknown_environment_warns(caplog):
    with caplog.at_level("WARNING", logger="config"):
        assert get_config("staging") is DevelopmentConfig
    assert "Unknown environment 'staging'" in caplog.text
