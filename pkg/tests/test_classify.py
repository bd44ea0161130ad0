from __future__ import annotations

import itertools
from fractions import Fraction

import pytest

from trajint.classify import NodeKind, classify_increments, classify_node, scan_tree
from trajint.construct import gen_example1, gen_example2, random_tree
from trajint.tree import EXACT, FLOAT, make_tree, one_step


@pytest.mark.parametrize(
    "children, kind, neutral",
    [
        ([0, 2], NodeKind.UP_DOWN, True),
        ([1, 2], NodeKind.ARBITRAGE_I, True),
        ([2, 3], NodeKind.ARBITRAGE_II, False),
        ([1, 1], NodeKind.FLAT, True),
        ([0, 1], NodeKind.ARBITRAGE_I, True),
        ([-1, 0], NodeKind.ARBITRAGE_II, False),
    ],
)
def test_classify_one_step(children, kind, neutral):
    c = classify_node(one_step(1, children), ())
    assert c.kind == kind
    assert c.zero_neutral is neutral


def test_sup_and_inf_increments():
    c = classify_node(one_step(1, [3, 0, Fraction(1, 2)]), ())
    assert (c.sup_inc, c.inf_inc) == (2, -1)


def test_leaf_is_rejected():
    with pytest.raises(ValueError):
        classify_node(one_step(1, [2, 0]), (0,))


SIGNS = [-2, -1, 0, 1, 2]


@pytest.mark.parametrize(
    "incs", [list(c) for r in (1, 2, 3) for c in itertools.combinations_with_replacement(SIGNS, r)]
)
def test_partition_property(incs):
    c = classify_increments([Fraction(x) for x in incs], EXACT)
    up_down = c.sup_inc > 0 and c.inf_inc < 0
    flat = c.sup_inc == 0 and c.inf_inc == 0
    arb_i = not (up_down or flat) and 0 in incs
    holds = [up_down, flat, arb_i, not (up_down or flat or arb_i)]
    assert sum(holds) == 1
    kinds = [NodeKind.UP_DOWN, NodeKind.FLAT, NodeKind.ARBITRAGE_I, NodeKind.ARBITRAGE_II]
    assert c.kind == kinds[holds.index(True)]
    assert c.zero_neutral == (c.sup_inc >= 0 and c.inf_inc <= 0)
    if c.kind == NodeKind.ARBITRAGE_II:
        assert not c.zero_neutral


def test_float_mode_band():
    t = one_step(1.0, [1.0 + 5e-10, 2.0], FLOAT)
    assert classify_node(t, ()).kind == NodeKind.ARBITRAGE_I


@pytest.mark.parametrize("N", [1, 2, 5, 8])
def test_example2_is_locally_arbitrage_free(N):
    scan = scan_tree(gen_example2(N))
    assert scan.locally_arbitrage_free
    assert scan.locally_0_neutral
    assert not scan.has_type_ii


@pytest.mark.parametrize("N", [1, 3, 6])
def test_example1_has_type_i_nodes_only(N):
    scan = scan_tree(gen_example1(N))
    kinds = {c.kind for c in scan.classes.values()}
    assert kinds <= {NodeKind.ARBITRAGE_I, NodeKind.FLAT}
    assert NodeKind.ARBITRAGE_I in kinds
    assert scan.locally_0_neutral and not scan.has_type_ii


def test_single_child_chain_is_flat():
    t = make_tree((1, [(1, [(1, [1])])]))
    scan = scan_tree(t)
    assert all(c.kind == NodeKind.FLAT for c in scan.classes.values())


def test_type_ii_flag():
    t = random_tree(3, depth=2, type_ii=True)
    assert scan_tree(t).has_type_ii
