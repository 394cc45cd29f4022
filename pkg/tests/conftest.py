import pytest
from hypothesis import settings

from monadlab.exactalg import GF
from monadlab.verify import Corpus

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

F101 = GF(101)


@pytest.fixture(scope="session")
def corpus():
    """Seeded sample corpus shared by the slower tests."""
    return Corpus()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # lets fixtures see the outcome of the test body
    outcome = yield
    if call.when == "call":
        item.rep_call = outcome.get_result()
