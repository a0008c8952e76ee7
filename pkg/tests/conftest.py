import pytest

from bigphase import Context


@pytest.fixture(scope="session")
def ctx1():
    return Context(1, max_tau_level=6)


@pytest.fixture(scope="session")
def ctx2():
    return Context(2, max_tau_level=6)


@pytest.fixture(scope="session")
def ctx3():
    return Context(3, max_tau_level=6)
