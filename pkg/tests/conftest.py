import pytest
from hypothesis import settings

from sskg import corpus

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def loaded():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = corpus.load(name)
        return cache[name]
    return get


@pytest.fixture(scope="session")
def flip(loaded):
    return loaded("flip2x3")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
