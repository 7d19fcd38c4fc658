import pytest

from bchdenom.freealgebra import bch_series


@pytest.fixture(scope="session")
def series2_14():
    """Two-letter series through degree 14; shared by the scan-heavy tests."""
    return bch_series(2, 14)


@pytest.fixture(scope="session")
def series3_8():
    """Three-letter series through degree 8."""
    return bch_series(3, 8)
