import logging
import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from core.linalg import RATIONALS, Field  # noqa: E402
from core.task_service import configure_task_service  # noqa: E402


@pytest.fixture(autouse=True)
def app_home(tmp_path, monkeypatch):
    """Keeps settings.json and the log file out of the real application data directory."""
    home = tmp_path / "ecquiver-home"
    monkeypatch.setenv("ECQUIVER_HOME", str(home))
    return home


@pytest.fixture(scope="session", autouse=True)
def task_service():
    service = configure_task_service(2)
    yield service
    service.shutdown()


@pytest.fixture
def qq():
    return RATIONALS


@pytest.fixture
def f3():
    return Field(3)


@pytest.fixture
def f5():
    return Field(5)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def data_dir():
    return ROOT


@pytest.fixture
def root_logger():
    """Restores the root logger after a test that reconfigures logging."""
    logger = logging.getLogger()
    handlers, level = list(logger.handlers), logger.level
    yield logger
    for handler in logger.handlers:
        if handler not in handlers:
            handler.close()
    logger.handlers[:] = handlers
    logger.setLevel(level)
