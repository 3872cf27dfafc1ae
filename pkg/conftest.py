"""
Shared pytest fixtures for spacing-lab
Run: pytest            (fast suite)
     SPACING_LAB_SLOW=1 pytest   (adds the Monte Carlo regressions)
"""
import os

import pytest

os.environ.setdefault("SPACING_LAB_ENV", "testing")

from spacing_lab.models import InvariantModel, Potential  # noqa: E402
from spacing_lab.services import EquilibriumService, GaudinService  # noqa: E402

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte Carlo regressions, run with SPACING_LAB_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.getenv("SPACING_LAB_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set SPACING_LAB_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def data_dir():
    return DATA_DIR


@pytest.fixture(scope="session")
def gaudin_table():
    return GaudinService.build_gaudin_table(5.0, 0.005, 40)


@pytest.fixture(scope="session")
def gue_model():
    return InvariantModel(Potential((0.0, 0.0, 1.0)), tag="gue")


@pytest.fixture(scope="session")
def gue_measure(gue_model):
    return EquilibriumService.build_measure(gue_model.v)


@pytest.fixture(scope="session")
def quartic_model():
    return InvariantModel(Potential((0.0, 0.0, 0.0, 0.0, 0.25)), tag="quartic")
