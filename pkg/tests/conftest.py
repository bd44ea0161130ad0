from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from trajint.tree import EXACT, FLOAT, make_tree, one_step

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def binomial_call_tree():
    """s0 = 1 with children 2 and 1/2."""
    return one_step(1, [2, Fraction(1, 2)], EXACT)


@pytest.fixture
def trinomial_tree():
    """s0 = 1 with children 0, 1, 2."""
    return one_step(1, [0, 1, 2], EXACT)


@pytest.fixture
def symmetric_binomial():
    """s0 = 1 with increments +1 and -1."""
    return one_step(1, [2, 0], EXACT)


@pytest.fixture
def depth2_tree():
    return make_tree((2, [(3, [4, 1]), (1, [2, Fraction(1, 2)])]), EXACT)


@pytest.fixture
def depth2_float():
    return make_tree((2, [(3, [4, 1]), (1, [2, 0.5])]), FLOAT)
