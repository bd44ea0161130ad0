from __future__ import annotations

from fractions import Fraction

import pytest

from trajint import payoff as P
from trajint.construct import gen_example1, gen_lattice, random_tree
from trajint.elementary import ElementaryFunction
from trajint.martingale import (
    NotIntegrableError,
    ProcessKind,
    classify_process,
    null_nodes,
    price_process,
    verify_tower,
)
from trajint.tree import make_tree, one_step

F = Fraction


def symmetric(N):
    return gen_lattice("binomial", N, s0=10, u=F(11, 10), d=F(9, 10))


def additive_binomial(N, s0=5):
    def build(s, rem):
        return s if rem == 0 else (s, [build(s + 1, rem - 1), build(s - 1, rem - 1)])

    return make_tree(build(s0, N))


class TestPriceProcess:
    def test_terminal_value_is_a_martingale(self):
        t = additive_binomial(3)
        proc = price_process(t, P.terminal(), "integral")
        assert all(proc.values[p] == t.value(p) for p in t.nodes())
        assert classify_process(t, proc).kind == ProcessKind.MARTINGALE

    def test_constant(self):
        t = random_tree(3, depth=3)
        for mode in ("upper", "lower", "integral"):
            assert set(price_process(t, P.constant(4), mode).values.values()) == {4}

    def test_trinomial_upper_is_super(self):
        t = gen_lattice("trinomial", 2, s0=2, u=F(3, 2), m=1, d=F(1, 2))
        f = P.table({leaf: abs(t.value(leaf) - 2) for leaf in t.all_leaves})
        proc = price_process(t, f, "upper")
        c = classify_process(t, proc)
        assert c.is_super and c.kind == ProcessKind.SUPERMARTINGALE
        assert proc.at(()) > price_process(t, f, "lower").at(())

    def test_integral_mode_rejects_non_integrable(self, trinomial_tree):
        with pytest.raises(NotIntegrableError, match="root"):
            price_process(trinomial_tree, P.abs_increment(0), "integral")

    def test_bad_mode(self, trinomial_tree):
        with pytest.raises(ValueError):
            price_process(trinomial_tree, P.constant(0), "middle")

    def test_lower_is_sub(self):
        t = random_tree(9, depth=3)
        c = classify_process(t, price_process(t, P.call(t.s0), "lower"))
        assert c.is_sub


class TestTower:
    @pytest.mark.parametrize("j, k", [(0, 0), (0, 1), (1, 2), (0, 2)])
    def test_elementary_full_equality(self, depth2_tree, j, k):
        p = ElementaryFunction((), 1, {(): 2, (1,): -1}, 2)
        rep = verify_tower(depth2_tree, p.as_payoff_values(depth2_tree), j, k)
        assert rep.ordered and rep.integrable and rep.equality and rep.fixed_point
        for chain in rep.chain.values():
            assert len(set(chain)) == 1

    def test_non_integrable_strict_somewhere(self):
        t = gen_lattice("trinomial", 2, s0=2, u=F(3, 2), m=1, d=F(1, 2))
        f = P.abs_increment(1)
        rep = verify_tower(t, f, 0, 1)
        assert rep.ordered and not rep.integrable and rep.equality is None
        lo, *_, hi = rep.chain[()]
        assert lo < hi

    def test_integrable_random(self):
        t = random_tree(12, depth=3)
        hold = {p: F(1, 3) for p in t.interior()}
        f = ElementaryFunction((), 2, hold, 3).as_payoff_values(t)
        rep = verify_tower(t, f, 1, 2)
        assert rep.equality and rep.fixed_point

    def test_bad_depths(self, depth2_tree):
        with pytest.raises(ValueError):
            verify_tower(depth2_tree, P.constant(0), 2, 1)


def test_null_nodes_of_example1():
    t = gen_example1(2)
    assert null_nodes(t) == [(0,), (0, 0), (1, 0)]


def test_martingale_skips_null_nodes():
    t = gen_example1(2)
    values = {p: F(0) for p in t.nodes()}
    values[(0,)] = values[(0, 0)] = F(9)
    from trajint.martingale import PriceProcess

    c = classify_process(t, PriceProcess(values, "integral"))
    assert c.is_martingale


def test_one_step_checks_recorded():
    t = one_step(1, [2, 0])
    c = classify_process(t, price_process(t, P.call(1), "upper"))
    assert c.one_step[()] == (F(1, 2), F(1, 2), F(1, 2))
