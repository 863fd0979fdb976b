import random

import pytest
from hypothesis import settings

from ternlab.tern import cyclic_group, make_affine, make_group_tern, symmetric_group

DEFAULT_SEED = 20240611

# property tests draw the same examples on every run
settings.register_profile("fixed", derandomize=True)
settings.load_profile("fixed")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized tests")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


@pytest.fixture(scope="session")
def r3():
    return make_affine(3)


@pytest.fixture(scope="session")
def s3_tern():
    return make_group_tern(symmetric_group(3), "x*z^-1*y")


@pytest.fixture(scope="session")
def z6_tern():
    return make_group_tern(cyclic_group(6), "x*z^-1*y")


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.line(k))
