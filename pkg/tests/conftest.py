"""Shared fixtures.

The exponential tables are session scoped on purpose: the dynamic
program caches its fill per table object, so reusing one object makes
ascending sweeps cost a single O(n**2) fill instead of one per test.
"""

import pytest

from grouprange import exponential_table


@pytest.fixture(scope="session")
def table40():
    return exponential_table(40)


@pytest.fixture(scope="session")
def table100():
    return exponential_table(100)


@pytest.fixture(scope="session")
def table400():
    return exponential_table(400)


@pytest.fixture(scope="session")
def table1000():
    return exponential_table(1000)
