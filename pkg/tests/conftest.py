import random

import pytest

from maabe.groups import TOY_PRIME_61, CurveGroup, ToyGroup


@pytest.fixture(scope="session")
def toy101():
    return ToyGroup(101)


@pytest.fixture(scope="session")
def toy61():
    return ToyGroup(TOY_PRIME_61)


@pytest.fixture(scope="session")
def curve():
    return CurveGroup()


@pytest.fixture
def rng():
    return random.Random(0xABE)


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)
