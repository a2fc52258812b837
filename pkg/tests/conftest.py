import os
import sys

import pytest

# модули пакета импортируются плоско, как внутри SWEEPER/
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "SWEEPER")))

from CoreModel import ScenarioParams  # noqa: E402


@pytest.fixture
def reference():
    """ Сценарий R0=100, r=10, V_T=1, n=2 """
    return ScenarioParams(R0=100.0, r=10.0, V_T=1.0, n=2)


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch, tmp_path):
    """ Логи во временный каталог, переменные SWEEP_* не влияют на тесты """
    for name in list(os.environ):
        if name.startswith("SWEEP_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("SWEEP_LOGGING_PATH", str(tmp_path / "logs"))
    monkeypatch.chdir(tmp_path)
