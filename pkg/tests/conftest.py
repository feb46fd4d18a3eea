import pytest

from rover_fuse.core import Alphabet, AlternativesMatrix, FrameSample

ACCEPTANCE_LINES = []


@pytest.fixture
def abc():
    return Alphabet("ABCD8")


@pytest.fixture
def crisp(abc):
    def make(*strings, alphabet=None):
        a = alphabet or abc
        return [
            FrameSample(result=AlternativesMatrix.from_string(s, a), frame_index=i)
            for i, s in enumerate(strings)
        ]

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
