import pytest

from fpcavity import run_all


@pytest.fixture(scope="session")
def full_summary():
    """One aggregate verification run shared by every test that needs it."""
    return run_all()
