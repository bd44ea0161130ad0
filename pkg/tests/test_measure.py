from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from trajint import payoff as P
from trajint.construct import arbitrage_i_null_set, gen_example1, gen_example2, random_tree
from trajint.elementary import ElementaryFunction
from trajint.measure import (
    check_integrable,
    check_K_property,
    check_L_property,
    conditional_integral,
    decompose_integrable,
    is_conditionally_null,
    verify_convergence_theorems,
)
from trajint.oracle import grid_superhedge
from trajint.superhedge import conditional_norm
from trajint.tree import FLOAT, make_tree, one_step

F = Fraction


class TestNull:
    def test_empty_set(self):
        rep = is_conditionally_null(gen_example2(2), [])
        assert rep.is_null and rep.norm_value == 0

    def test_type_i_subtree(self):
        t = gen_example1(3)
        A = arbitrage_i_null_set(t, (1,))
        rep = is_conditionally_null(t, A, (1,))
        assert rep.is_null
        assert rep.certificate.total_premium == 0

    def test_single_binomial_leaf_not_null(self):
        t = one_step(1, [2, 0])
        rep = is_conditionally_null(t, [(0,)])
        assert not rep.is_null
        assert rep.norm_value == F(1, 2)
        g = grid_superhedge(t.with_mode(FLOAT), P.indicator([(0,)]))
        assert abs(g - 0.5) < 1e-6

    def test_finite_unions_of_null_sets(self):
        t = gen_example1(4)
        A = arbitrage_i_null_set(t, (1,))
        B = arbitrage_i_null_set(t, (1, 1))
        assert is_conditionally_null(t, A + B).is_null

    def test_norm_zero_iff_zero_outside_null_set(self):
        t = gen_example1(3)
        A = arbitrage_i_null_set(t, ())
        f = {leaf: (F(5) if leaf in A else F(0)) for leaf in t.all_leaves}
        assert conditional_norm(t, f) == 0
        f[(1, 1, 1)] = F(1)
        assert conditional_norm(t, f) > 0


class TestL:
    def test_example2(self):
        assert all(check_L_property(gen_example2(8)).values())

    def test_type_ii_fails_there(self):
        t = make_tree((1, [(2, [3, 4]), (0, [1, -1])]))
        res = check_L_property(t)
        assert res[(0,)] is False
        assert res[(1,)] is True
        assert res[()] is False

    def test_flat_chain(self):
        t = make_tree((1, [(1, [1])]))
        assert all(check_L_property(t).values())


class TestK:
    def test_symmetric_binomial_increment(self):
        t = one_step(1, [2, 0])
        k = check_K_property(t, ElementaryFunction((), 0, {(): 1}, 1))
        assert (k.ibar_pos, k.integral, k.ibar_neg) == (F(1, 2), 0, F(1, 2))
        assert k.holds

    def test_nonnegative_elementary(self):
        t = random_tree(2, depth=3)
        hold = {(): F(1)}
        base = ElementaryFunction((), 0, hold, 3)
        p = ElementaryFunction((), -min(base.leaf_values(t).values()), hold, 3)
        k = check_K_property(t, p)
        assert k.ibar_neg == 0 and k.holds

    @pytest.mark.parametrize("seed", range(10))
    def test_random(self, seed):
        rng = np.random.default_rng(seed)
        t = random_tree(seed, depth=3)
        node = t.interior()[int(rng.integers(0, len(t.interior())))]
        hold = {p: F(int(rng.integers(-6, 7)), 3) for p in t.interior(node)}
        assert check_K_property(t, ElementaryFunction(node, F(int(rng.integers(-3, 4))), hold, 3)).holds

    def test_wrong_node(self):
        t = one_step(1, [2, 0])
        with pytest.raises(ValueError):
            check_K_property(t, ElementaryFunction((), 0, {}, 1), (0,))


class TestIntegrable:
    def test_elementary(self, depth2_tree):
        p = ElementaryFunction((), 1, {(): 2, (0,): -1}, 2)
        rep = check_integrable(depth2_tree, p.as_payoff_values(depth2_tree), 0)
        assert rep.integrable and rep.integral_value[()] == 1

    def test_trinomial_abs_not_integrable(self, trinomial_tree):
        rep = check_integrable(trinomial_tree, P.abs_increment(0), 0)
        assert not rep.integrable
        assert rep.gap[()] == 1

    def test_differs_on_null_set(self):
        t = gen_example1(3)
        g = ElementaryFunction((), 2, {(): 1}, 3)
        gv = g.as_payoff_values(t)
        A = set(arbitrage_i_null_set(t, (1,)))
        f = {leaf: (gv[leaf] + 7 if leaf in A else gv[leaf]) for leaf in t.all_leaves}
        rep = check_integrable(t, f, 0)
        assert rep.integrable
        assert conditional_integral(t, f) == conditional_integral(t, gv) == 2

    def test_exceptional_null_nodes_tolerated(self):
        # the only gap sits at a node whose conditional space is null
        t = make_tree((1, [(2, [(2, [3, 1, 2])]), (1, [(1, [1])])]))
        f = P.abs_increment(2)
        rep = check_integrable(t, f, 2)
        assert rep.exceptional == [(0, 0)]
        assert rep.integrable

    def test_depth_range(self, trinomial_tree):
        with pytest.raises(ValueError):
            check_integrable(trinomial_tree, P.constant(0), 3)


class TestConvergence:
    def test_scaled_elementary_mct(self):
        t = random_tree(3, depth=2)
        g = ElementaryFunction((), 3, {(): F(1, 2)}, 2)
        base = g.as_payoff_values(t)
        assert min(base.values()) >= 0
        fam = [P.scale(F(n - 1, n), base) for n in range(1, 9)]
        rep = verify_convergence_theorems(t, fam, 0, "mct", limit=base)
        r = rep.residuals[()]
        assert r == [F(3, n) for n in range(1, 9)]
        assert not rep.ok
        fam.append(base)
        assert verify_convergence_theorems(t, fam, 0, "mct").ok

    def test_beppo_levi_partial_sums(self):
        t = random_tree(4, depth=2)
        pieces = []
        for k in range(1, 6):
            e = ElementaryFunction((), 0, {(): F(1, k)}, 2)
            lift = -min(e.leaf_values(t).values())
            pieces.append(ElementaryFunction((), lift, {(): F(1, k)}, 2).as_payoff_values(t))
        rep = verify_convergence_theorems(t, pieces, 1, "beppo-levi")
        assert rep.ok
        assert all(r[-1] == 0 for r in rep.residuals.values())

    def test_constant_sequence(self):
        t = random_tree(5, depth=2)
        fam = [P.constant(2)] * 4
        rep = verify_convergence_theorems(t, fam, 0, "mct")
        assert rep.ok and set(rep.residuals[()]) == {0}

    def test_non_monotone_rejected(self):
        t = random_tree(5, depth=2)
        with pytest.raises(ValueError):
            verify_convergence_theorems(t, [P.constant(2), P.constant(1)], 0, "mct")

    def test_tail_bound(self):
        t = random_tree(6, depth=2)
        fam = [P.constant(F(1, 2**k)) for k in range(10)]
        rep = verify_convergence_theorems(t, fam, 0, "beppo-levi", max_terms=8)
        assert rep.tail_bound == F(1, 256) + F(1, 512)


@pytest.mark.parametrize("seed", range(5))
def test_decomposition_of_integrable_payoff(seed):
    t = random_tree(seed, depth=3)
    hold = {p: F(1, 2) for p in t.interior()}
    base = ElementaryFunction((), 0, hold, 3)
    p = ElementaryFunction((), -min(base.leaf_values(t).values()), hold, 3)
    d = decompose_integrable(t, p.as_payoff_values(t))
    assert d.ok and d.u_norm == 0
