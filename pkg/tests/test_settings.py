import logging

import pytest
from mpmath import mp
from pydantic import ValidationError

from config.settings import Settings


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("DIGITS", "EPS", "NMAX", "QUAD_DEGREE", "GRID", "WORKERS", "OUTPUT_FORMAT", "LOG_LEVEL"):
        monkeypatch.delenv(f"APP_{name}", raising=False)


def test_defaults_come_from_the_yaml_file():
    settings = Settings.get_settings()
    assert settings.DIGITS == 40
    assert settings.EPS == 1e-45
    assert settings.NMAX == 20000
    assert settings.QUAD_DEGREE == 5
    assert settings.GRID == "small"
    assert settings.OUTPUT_FORMAT == "json"


def test_prefixed_environment_variable_wins(monkeypatch):
    monkeypatch.setenv("APP_DIGITS", "60")
    monkeypatch.setenv("APP_GRID", "full")
    settings = Settings.get_settings()
    assert settings.DIGITS == 60
    assert settings.GRID == "full"


def test_invalid_values_are_logged_and_raised(monkeypatch, caplog):
    monkeypatch.setenv("APP_DIGITS", "5")
    with caplog.at_level(logging.ERROR):
        with pytest.raises(ValidationError):
            Settings.get_settings()
    assert "Invalid engine settings" in caplog.text
    assert "DIGITS" in caplog.text


def test_overrides_skip_none_and_keep_the_rest():
    base = Settings.get_settings()
    updated = base.with_overrides(DIGITS=55, EPS=None, GRID="full")
    assert updated.DIGITS == 55
    assert updated.EPS == base.EPS
    assert updated.GRID == "full"
    assert base.DIGITS == 40


@pytest.mark.parametrize(
    "overrides",
    [{"DIGITS": 10}, {"EPS": 0.0}, {"NMAX": 0}, {"QUAD_DEGREE": 11}, {"GRID": "huge"}, {"OUTPUT_FORMAT": "xml"}],
)
def test_overrides_are_validated(overrides):
    with pytest.raises(ValidationError):
        Settings.get_settings().with_overrides(**overrides)


def test_budget_and_precision():
    settings = Settings.get_settings().with_overrides(DIGITS=48, EPS=1e-50, NMAX=123)
    budget = settings.to_budget()
    assert budget.eps == 1e-50
    assert budget.n_max == 123
    settings.apply_precision()
    assert mp.dps == 48
