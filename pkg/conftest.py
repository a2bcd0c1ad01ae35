from pathlib import Path

import numpy as np
import pytest

from gdpgrowth import read_config

ROOT = Path(__file__).parent
DATA_DIR = ROOT / "gdpgrowth" / "data"


@pytest.fixture(autouse=True)
def _quiet_log_file(monkeypatch):
    # 测试中不写 app.log
    monkeypatch.setenv("GDP_LOG_FILE", "")
    monkeypatch.setenv("GDP_WORKERS", "1")


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def usa_config_path() -> Path:
    return DATA_DIR / "usa" / "usa.env"


@pytest.fixture
def usa_config(usa_config_path):
    return read_config(usa_config_path)


@pytest.fixture
def rng():
    return np.random.default_rng(20060101)
