from __future__ import annotations

import pytest

from absplan import fixtures


@pytest.fixture
def air1():
    return fixtures.air1()


@pytest.fixture
def air1_fuel():
    return fixtures.air1_fuel()
