import os
from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return Path(__file__).parent / "fixtures"


def pytest_configure(config: pytest.Config) -> None:
    os.environ.setdefault("INTERSECTION_FORMS_CROSS_CHECK", "1")
