from pathlib import Path

import pytest

from _oracles import derive_table_moments

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def table_moments():
    """Moment vector recovered from the published bound values."""
    return derive_table_moments()


@pytest.fixture(scope="session")
def fixture_csv() -> Path:
    return DATA_DIR / "table_mirror_n1769.csv"
