from __future__ import annotations

import pytest

from sploop import QIndex, build_sieve


@pytest.fixture(scope="session")
def sieve_117():
    return build_sieve(117)


@pytest.fixture(scope="session")
def index_117(sieve_117):
    return QIndex.from_sieve(sieve_117)


@pytest.fixture(scope="session")
def sieve_1e4():
    return build_sieve(10**4)


@pytest.fixture(scope="session")
def index_1e4(sieve_1e4):
    return QIndex.from_sieve(sieve_1e4)


@pytest.fixture(scope="session")
def sieve_1e5():
    return build_sieve(10**5)


@pytest.fixture(scope="session")
def index_1e5(sieve_1e5):
    return QIndex.from_sieve(sieve_1e5)


@pytest.fixture(scope="session")
def sieve_1e7():
    return build_sieve(10**7)


@pytest.fixture(scope="session")
def index_1e7(sieve_1e7):
    return QIndex.from_sieve(sieve_1e7)
