from __future__ import annotations

from fractions import Fraction

import pytest

from trajint import payoff as P
from trajint.classify import NodeKind, scan_tree
from trajint.construct import (
    ConeWarning,
    ContrarianError,
    accumulate_portfolios,
    arbitrage_i_null_set,
    contrarian_trajectory,
    example1_family,
    example1_jump_leaf,
    example2_selection,
    gen_example1,
    gen_example2,
    gen_lattice,
    random_tree,
    verify_example1_L_failure,
)
from trajint.elementary import LONG_ONLY, ElementaryFunction, evaluate_elementary
from trajint.measure import check_L_property
from trajint.tree import FLOAT

F = Fraction


def leaf_prices(t):
    return sorted(tuple(t.price_path(leaf)) for leaf in t.all_leaves)


class TestExamples:
    def test_example1_n1(self):
        assert leaf_prices(gen_example1(1)) == [(1, 1), (1, 2)]

    def test_example1_n2(self):
        assert leaf_prices(gen_example1(2)) == [(1, 1, 1), (1, 1, 2), (1, 2, 2)]

    def test_example1_n0(self):
        t = gen_example1(0)
        assert t.horizon == 0 and t.s0 == 1

    def test_example2_n1(self):
        assert leaf_prices(gen_example2(1)) == [(2, 1), (2, 2), (2, 3)]

    def test_example2_n2(self):
        assert len(gen_example2(2).all_leaves) == 5

    def test_example2_internal_nodes_up_down(self):
        t = gen_example2(4)
        for p, c in scan_tree(t).classes.items():
            if len(t.node(p).children) > 1:
                assert c.kind == NodeKind.UP_DOWN
                assert sorted(t.increments(p)) == [-1, 0, 1]

    @pytest.mark.parametrize("N", range(1, 7))
    def test_example2_L_holds_for_every_horizon(self, N):
        assert all(check_L_property(gen_example2(N)).values())

    def test_jump_leaf(self):
        t = gen_example1(4)
        assert t.price_path(example1_jump_leaf(4, 2)) == [1, 1, 2, 2, 2]


class TestLattice:
    def test_binomial_one_step(self):
        t = gen_lattice("binomial", 1, s0=1, u=2, d=F(1, 2))
        assert leaf_prices(t) == [(1, F(1, 2)), (1, 2)]

    def test_trinomial_one_step(self):
        t = gen_lattice("trinomial", 1, s0=1, u=2, m=1, d=F(1, 2))
        assert sorted(t.value(leaf) for leaf in t.all_leaves) == [F(1, 2), 1, 2]

    def test_binomial_two_steps(self):
        assert len(gen_lattice("binomial", 2).all_leaves) == 4

    def test_u_not_above_d(self):
        with pytest.raises(ValueError):
            gen_lattice("binomial", 1, u=1, d=2)

    def test_nonpositive_factor(self):
        with pytest.raises(ValueError):
            gen_lattice("binomial", 1, u=2, d=0)


class TestRandomTree:
    @pytest.mark.parametrize("seed", range(20))
    def test_arbitrage_free_and_in_range(self, seed):
        t = random_tree(seed, depth=3, max_branching=3)
        assert scan_tree(t).locally_arbitrage_free
        for p in t.nodes():
            assert F(1, 10) <= t.value(p) <= 10
        for p in t.interior():
            assert len(t.node(p).children) <= 3

    def test_deterministic(self):
        assert random_tree(5).to_dict() == random_tree(5).to_dict()

    def test_type_ii_variant(self):
        assert scan_tree(random_tree(5, type_ii=True)).has_type_ii

    def test_float_mode(self):
        t = random_tree(5, mode=FLOAT)
        assert isinstance(t.s0, float)


class TestContrarian:
    def test_example2_unit_holdings(self):
        t = gen_example2(4)
        path = contrarian_trajectory(t, (), 1, 0.5)
        assert all(g <= 0 for g in path.gains)
        assert all(g < b for g, b in zip(path.gains, path.bounds))
        assert path.total < 0.5

    def test_zero_holdings_leftmost(self):
        t = gen_example2(3)
        assert contrarian_trajectory(t, (), 0, 0.1).leaf == (0, 0, 0)

    def test_type_ii_error_names_node(self):
        t = gen_lattice("binomial", 2, u=3, d=2)
        with pytest.raises(ContrarianError, match="root"):
            contrarian_trajectory(t, (), 1, 1e-3)

    def test_type_i_takes_zero_child(self):
        t = gen_example1(3)
        path = contrarian_trajectory(t, (), {(): -5}, 0.01)
        assert path.leaf == (1, 1, 1)

    def test_cumulative_bound_holds_for_every_prefix(self):
        t = random_tree(8, depth=3)
        H = {p: F(i % 3 - 1) for i, p in enumerate(t.interior())}
        path = contrarian_trajectory(t, (), H, 0.2)
        running = 0
        for g in path.gains:
            running += g
            assert running < 0.2

    def test_eps_positive(self):
        with pytest.raises(ValueError):
            contrarian_trajectory(gen_example2(1), (), 1, 0)


class TestAccumulate:
    def test_two_copies(self):
        e = ElementaryFunction((), 1, {(): 1}, 1)
        acc = accumulate_portfolios([e, e])
        assert acc.V == 2 and acc.holdings == {(): 2}

    def test_cone_warning(self):
        e = ElementaryFunction((), 1, {(): 1}, 1)
        with pytest.warns(ConeWarning):
            accumulate_portfolios([e, e.scale(-2)], LONG_ONLY)

    def test_mismatched_nodes(self):
        with pytest.raises(ValueError):
            accumulate_portfolios([ElementaryFunction((), 1, {}, 1), ElementaryFunction((0,), 1, {}, 1)])

    def test_example1_family_folds(self):
        acc = accumulate_portfolios(example1_family(3, 5))
        assert acc.V == 0
        assert acc.holdings == {(): 1, (1,): 1, (1, 1): 1}


class TestExample1Failure:
    def test_three_of_five(self):
        rep = verify_example1_L_failure(3, 5)
        assert len(rep.dominated_leaves) == 3
        assert rep.total_premium == 0 and rep.dominates and rep.ok

    def test_single(self):
        rep = verify_example1_L_failure(1)
        assert rep.dominated_leaves == [(0,)]
        assert rep.ok

    def test_flat_sum(self):
        rep = verify_example1_L_failure(4)
        assert rep.flat_sum == 0 and rep.rfp_violated

    def test_requires_m_at_most_n(self):
        with pytest.raises(ValueError):
            verify_example1_L_failure(4, 3)

    def test_undominated_late_jumps(self):
        t = gen_example1(5)
        fam = example1_family(3, 5)
        late = example1_jump_leaf(5, 4)
        assert sum(evaluate_elementary(f, t, late) for f in fam) == 0


def test_example2_selection_gains_nonpositive():
    N = 4
    t = gen_example2(N)
    H = [F(1), F(-2), F(0), F(3)]
    for n, leaf in enumerate(example2_selection(N, H)):
        path = t.price_path(leaf)
        assert H[n] * (path[n + 1] - path[n]) <= 0


def test_null_set_helper_requires_type_i():
    with pytest.raises(ValueError):
        arbitrage_i_null_set(gen_example2(2), ())
