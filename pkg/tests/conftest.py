import random

import pytest
from hypothesis import settings

from egjohnson.words import Alphabet

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def ab():
    return Alphabet.of("a b")


@pytest.fixture
def abc():
    return Alphabet.of("a b c")


@pytest.fixture
def rng():
    return random.Random(12345)


CRITERION_LINES = pytest.StashKey[list]()


@pytest.fixture
def criterion_log(request):
    return request.config.stash.setdefault(CRITERION_LINES, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(CRITERION_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
