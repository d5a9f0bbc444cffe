import pytest

from mertens import Constants, Predictor, build_sieve


@pytest.fixture(scope="session")
def table():
    return build_sieve(10**6)


@pytest.fixture(scope="session")
def small_table():
    return build_sieve(10**5)


@pytest.fixture(scope="session")
def constants(table):
    return Constants.compute(table)


@pytest.fixture(scope="session")
def predictor(constants):
    return Predictor(constants)
