"""Pytest configuration and fixtures for lgfnoma tests."""

import logging
import os
from unittest.mock import patch

import pytest

from lgfnoma.config.settings import Settings
from lgfnoma.core.params import SystemParams
from lgfnoma.core.simulator import RngSpec


@pytest.fixture(autouse=True)
def isolated_environment(tmp_path, monkeypatch):
    """Pin LGF_* variables so tests never read a user's config or write to ./results."""
    env_vars = {
        "LGF_OUTPUT_DIR": str(tmp_path / "results"),
        "LGF_LOG_LEVEL": "ERROR",
        "LOG_LEVEL": "ERROR",
        "LGF_SEED": "20240601",
        "LGF_MAX_ENUMERATION": "1e7",
        "LGF_MAX_DEVICE_SLOTS": "5e9",
        "LGF_REPLICATION_SLOTS": "5000",
        "LGF_PARALLEL": "true",
        "XDG_CONFIG_HOME": str(tmp_path / "xdg"),
        "HOME": str(tmp_path / "home"),
    }
    monkeypatch.delenv("LGF_CONFIG", raising=False)
    monkeypatch.chdir(tmp_path)
    with patch.dict(os.environ, env_vars, clear=False):
        Settings.refresh_from_env()
        yield
    Settings.refresh_from_env()


@pytest.fixture
def default_params() -> SystemParams:
    return SystemParams()


@pytest.fixture
def seed() -> RngSpec:
    return RngSpec(master_seed=20240601)


# Disable logging to reduce noise during tests
logging.getLogger().setLevel(logging.ERROR)
