import numpy as np
import pytest

from hnstruct import linalg
from hnstruct.instances import (
    example_g4,
    kaehler_instance,
    random_endo_matrix,
    random_instance,
)
from hnstruct.tensors import Endo

# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def rand_endo(rng, frame):
    return Endo(frame, linalg.convert(random_endo_matrix(rng, frame.n), frame.backend))


@pytest.fixture(scope="session")
def g4():
    return example_g4((1, 2, 3, 4))


@pytest.fixture(scope="session")
def g4_float():
    return example_g4((1, 2, 3, 4), backend="float")


@pytest.fixture(scope="session")
def kaehler():
    return kaehler_instance(1).build()


@pytest.fixture(scope="session")
def random_structures():
    return [random_instance(s).build() for s in range(100, 110)]


@pytest.fixture(scope="session")
def random_frames(random_structures):
    return [H.frame for H in random_structures]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
