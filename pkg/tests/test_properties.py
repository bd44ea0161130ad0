from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from props import PROPERTIES, run_properties
from trajint.construct import random_tree
from trajint.extreal import INF, NEG_INF, ext_add, ext_scale, ext_sub
from trajint.tree import EXACT

seeds = st.integers(0, 2**32 - 1)
ext = st.one_of(
    st.fractions(min_value=-100, max_value=100, max_denominator=50),
    st.sampled_from([INF, NEG_INF]),
)


@pytest.mark.parametrize("name", sorted(PROPERTIES))
@settings(max_examples=25)
@given(seed=seeds)
def test_property_on_random_trees(name, seed):
    rng = np.random.default_rng(seed)
    tree = random_tree(rng, depth=int(rng.integers(1, 4)), max_branching=3, mode=EXACT)
    assert PROPERTIES[name](tree, rng)


def test_seeded_run_has_no_failures():
    assert run_properties(90, seed=7) == []


@given(ext, ext)
def test_ext_add_commutes(a, b):
    assert ext_add(a, b) == ext_add(b, a)


@given(ext, ext, ext)
def test_ext_add_associates(a, b, c):
    assert ext_add(ext_add(a, b), c) == ext_add(a, ext_add(b, c))


@given(ext)
def test_inf_absorbs(a):
    assert ext_add(a, INF) == INF
    assert ext_sub(INF, a) == INF


@given(st.fractions(min_value=0, max_value=100, max_denominator=20), ext)
def test_scale_by_nonnegative(c, a):
    out = ext_scale(c, a)
    if c == 0:
        assert out == 0
    elif math.isinf(a):
        assert out == a
    else:
        assert out == c * a


@given(st.fractions(min_value=-100, max_value=-1, max_denominator=20))
def test_scale_flips_infinity(c):
    assert ext_scale(c, INF) == NEG_INF
    assert ext_scale(Fraction(c), 3) == 3 * c
