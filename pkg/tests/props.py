"""Shared property checks used by the hypothesis tests and the acceptance run."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from trajint.construct import random_tree
from trajint.elementary import ElementaryFunction
from trajint.measure import check_K_property
from trajint.oracle import dual_upper_integral
from trajint.superhedge import conditional_norm, ibar, lower_integral, upper_integral
from trajint.tree import EXACT, TrajectoryTree


def random_payoff(tree: TrajectoryTree, rng: np.random.Generator, scale: int = 500) -> Dict[tuple, Fraction]:
    return {leaf: Fraction(int(rng.integers(-scale, scale + 1)), 100) for leaf in tree.all_leaves}


def random_elementary(tree: TrajectoryTree, rng: np.random.Generator) -> ElementaryFunction:
    nodes = list(tree.nodes())
    node = nodes[int(rng.integers(len(nodes)))] if rng.random() < 0.3 else ()
    hold = {
        q: Fraction(int(rng.integers(-300, 301)), 100)
        for q in tree.interior(node)
        if rng.random() < 0.8
    }
    return ElementaryFunction(node, Fraction(int(rng.integers(-500, 501)), 100), hold, tree.horizon)


def _sum(f, g):
    return {k: f[k] + g[k] for k in f}


def check_isotony(tree, rng) -> bool:
    f = random_payoff(tree, rng)
    bump = {k: Fraction(int(rng.integers(0, 200)), 100) for k in f}
    return upper_integral(tree, f) <= upper_integral(tree, _sum(f, bump))


def check_homogeneity(tree, rng) -> bool:
    f = random_payoff(tree, rng)
    c = Fraction(int(rng.integers(1, 50)), 7)
    return upper_integral(tree, {k: c * v for k, v in f.items()}) == c * upper_integral(tree, f)


def check_subadditivity(tree, rng) -> bool:
    f, g = random_payoff(tree, rng), random_payoff(tree, rng)
    return upper_integral(tree, _sum(f, g)) <= upper_integral(tree, f) + upper_integral(tree, g)


def check_translation(tree, rng) -> bool:
    f = random_payoff(tree, rng)
    c = Fraction(int(rng.integers(-300, 301)), 100)
    return upper_integral(tree, {k: v + c for k, v in f.items()}) == upper_integral(tree, f) + c


def check_lower_below_upper(tree, rng) -> bool:
    f = random_payoff(tree, rng)
    return lower_integral(tree, f) <= upper_integral(tree, f)


def check_upper_below_ibar(tree, rng) -> bool:
    f = {k: abs(v) for k, v in random_payoff(tree, rng).items()}
    return upper_integral(tree, f) <= ibar(tree, f)


def check_norm_bound(tree, rng) -> bool:
    f = random_payoff(tree, rng)
    return abs(upper_integral(tree, f)) <= conditional_norm(tree, f)


def check_dual(tree, rng) -> bool:
    f = random_payoff(tree, rng)
    return upper_integral(tree, f) == dual_upper_integral(tree, f)


def check_elementary_value(tree, rng) -> bool:
    p = random_elementary(tree, rng)
    return upper_integral(tree, p.as_payoff_values(tree), p.node) == p.V


def check_K(tree, rng) -> bool:
    return check_K_property(tree, random_elementary(tree, rng)).holds


PROPERTIES: Dict[str, Callable[[TrajectoryTree, np.random.Generator], bool]] = {
    "isotony": check_isotony,
    "homogeneity": check_homogeneity,
    "subadditivity": check_subadditivity,
    "translation": check_translation,
    "lower<=upper": check_lower_below_upper,
    "upper<=ibar": check_upper_below_ibar,
    "norm bound": check_norm_bound,
    "dual": check_dual,
    "elementary value": check_elementary_value,
    "K": check_K,
}


def run_properties(n: int, seed: int = 0) -> List[str]:
    """Run ``n`` property assertions on seeded random trees; return failures."""
    rng = np.random.default_rng(seed)
    names = list(PROPERTIES)
    failures = []
    tree = None
    for i in range(n):
        if i % len(names) == 0:
            tree = random_tree(rng, depth=int(rng.integers(1, 4)), max_branching=3, mode=EXACT)
        name = names[i % len(names)]
        if not PROPERTIES[name](tree, rng):
            failures.append(f"{name} #{i}")
    return failures
