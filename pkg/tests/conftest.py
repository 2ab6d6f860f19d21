import random

import pytest

from kcbcolor.graph_core import OnlineGraph, PresentationStep


def steps_of(*pres):
    """Build steps from 0-based pre-neighborhood lists."""
    return [PresentationStep.of(v, pre) for v, pre in enumerate(pres)]


def graph_of(*pres):
    return OnlineGraph.from_pre_neighborhoods(pres)


@pytest.fixture
def rng():
    return random.Random(20240917)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
