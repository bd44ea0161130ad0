"""Tree generators, contrarian trajectories and portfolio accumulation."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Union

import numpy as np

from .classify import NodeKind, classify_node
from .elementary import Constraint, ElementaryFunction, evaluate_elementary
from .extreal import Number
from .tree import EXACT, Node, NodePath, NumericMode, TrajectoryTree, format_path


def _tree(root: Node, horizon: int, mode: NumericMode) -> TrajectoryTree:
    return TrajectoryTree(root, horizon, mode)


def gen_example1(N: int, mode: NumericMode = EXACT) -> TrajectoryTree:
    """Paths that sit at 1 and jump once to 2, plus the path that never jumps.

    Nodes on the flat prefix have children ``[2, 1]`` (jump first), so the
    leaf jumping at time ``n`` is ``(1,) * (n - 1) + (0,) * (N - n + 1)`` and
    the never-jumping leaf is ``(1,) * N``.
    """
    if N < 0:
        raise ValueError("horizon must be nonnegative")
    one, two = mode.coerce(1), mode.coerce(2)

    def jumped(rem: int) -> Node:
        return Node(two, (jumped(rem - 1),) if rem else ())

    def flat(rem: int) -> Node:
        if rem == 0:
            return Node(one)
        return Node(one, (jumped(rem - 1), flat(rem - 1)))

    return _tree(flat(N), N, mode)


def gen_example2(N: int, mode: NumericMode = EXACT) -> TrajectoryTree:
    """Paths flat at 2 that jump once to 3 or to 1 and stay, plus the flat path.

    Flat-prefix nodes have children ``[3, 1, 2]``.
    """
    if N < 0:
        raise ValueError("horizon must be nonnegative")
    one, two, three = mode.coerce(1), mode.coerce(2), mode.coerce(3)

    def chain(value: Number, rem: int) -> Node:
        return Node(value, (chain(value, rem - 1),) if rem else ())

    def flat(rem: int) -> Node:
        if rem == 0:
            return Node(two)
        return Node(two, (chain(three, rem - 1), chain(one, rem - 1), flat(rem - 1)))

    return _tree(flat(N), N, mode)


def gen_lattice(
    kind: str,
    N: int,
    s0: Number = 1,
    u: Number = 2,
    d: Number = Fraction(1, 2),
    m: Number = 1,
    mode: NumericMode = EXACT,
) -> TrajectoryTree:
    """Multiplicative binomial (``u``, ``d``) or trinomial (``u``, ``m``, ``d``) lattice."""
    u, d, m, s0 = (mode.coerce(x) for x in (u, d, m, s0))
    if min(u, d, m, s0) <= 0:
        raise ValueError("lattice factors and s0 must be positive")
    if u <= d:
        raise ValueError("need u > d")
    if kind == "binomial":
        factors = (u, d)
    elif kind == "trinomial":
        if not d < m < u:
            raise ValueError("need d < m < u")
        factors = (u, m, d)
    else:
        raise ValueError(f"unknown lattice kind {kind!r}")

    def build(s: Number, rem: int) -> Node:
        if rem == 0:
            return Node(s)
        return Node(s, tuple(build(s * f, rem - 1) for f in factors))

    return _tree(build(s0, N), N, mode)


def random_tree(
    seed: Union[int, np.random.Generator],
    depth: int = 3,
    max_branching: int = 3,
    mode: NumericMode = EXACT,
    zero_child_prob: float = 0.2,
    flat_prob: float = 0.1,
    type_ii: bool = False,
    type_i_prob: float = 0.0,
) -> TrajectoryTree:
    """Seeded random tree with prices on a 1/100 grid in ``[0.1, 10]``.

    Every interior node gets at least one up and one down child with
    increments of size at least ``0.25`` (or is a flat single-child node), so
    the tree is locally arbitrage-free.  ``type_i_prob`` turns nodes into type
    I arbitrage nodes (a zero and an up child) and ``type_ii`` forces one
    interior node to have only upward moves.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    lo_c, hi_c, gap = 10, 1000, 25

    def price(c: int) -> Number:
        return mode.coerce(Fraction(int(c), 100))

    def build(c: int, rem: int) -> Node:
        if rem == 0:
            return Node(price(c))
        can_up = c + gap <= hi_c
        can_down = c - gap >= lo_c
        if not (can_up and can_down) or rng.random() < flat_prob:
            return Node(price(c), (build(c, rem - 1),))
        kids: List[int] = []
        if rng.random() < type_i_prob:
            kids = [c, int(rng.integers(c + gap, hi_c + 1))]
        else:
            k = int(rng.integers(2, max(2, max_branching) + 1))
            kids = [int(rng.integers(c + gap, hi_c + 1)), int(rng.integers(lo_c, c - gap + 1))]
            while len(kids) < k:
                if rng.random() < zero_child_prob:
                    kids.append(c)
                elif rng.random() < 0.5:
                    kids.append(int(rng.integers(c + gap, hi_c + 1)))
                else:
                    kids.append(int(rng.integers(lo_c, c - gap + 1)))
            kids = [kids[i] for i in rng.permutation(len(kids))]
        return Node(price(c), tuple(build(x, rem - 1) for x in kids))

    c0 = int(rng.integers(100, 901))
    root = build(c0, depth)
    tree = _tree(root, depth, mode)
    if type_ii and depth > 0:
        tree = _force_type_ii(tree, rng)
    return tree


def _force_type_ii(tree: TrajectoryTree, rng: np.random.Generator) -> TrajectoryTree:
    """Replace one interior node's moves with strictly upward ones."""
    interior = tree.interior()
    target = interior[int(rng.integers(0, len(interior)))]

    def rebuild(node: Node, path: NodePath) -> Node:
        if path == target:
            base = node.value
            kids = []
            for i, c in enumerate(node.children):
                bump = tree.mode.coerce(Fraction(25 * (i + 1), 100))
                kids.append(_shift(c, base + bump - c.value))
            return Node(node.value, tuple(kids))
        return Node(node.value, tuple(rebuild(c, path + (i,)) for i, c in enumerate(node.children)))

    return _tree(rebuild(tree.root, ()), tree.horizon, tree.mode)


def _shift(node: Node, by: Number) -> Node:
    return Node(node.value + by, tuple(_shift(c, by) for c in node.children))


class ContrarianError(ValueError):
    """No child keeps the step gain below its bound; the node is not 0-neutral."""


@dataclass(frozen=True)
class ContrarianPath:
    leaf: NodePath
    gains: List[Number]
    bounds: List[float]

    @property
    def total(self) -> Number:
        return sum(self.gains)


HoldingsLike = Union[Mapping[NodePath, Number], Callable[[NodePath], Number], Number]


def _holding(F: HoldingsLike, path: NodePath) -> Number:
    if callable(F):
        return F(path)
    if isinstance(F, Mapping):
        return F.get(path, 0)
    return F


def contrarian_trajectory(
    tree: TrajectoryTree,
    node: Sequence[int],
    F: HoldingsLike,
    eps: float,
) -> ContrarianPath:
    """Extend ``node`` to a leaf along which the gains of ``F`` stay small.

    At depth ``i`` a child minimising ``F_i * d_i`` is taken (leftmost on
    ties, a zero-increment child at type I nodes), and the step gain must be
    below ``eps / 2**(i + 1)``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    path = tuple(node)
    tree.node(path)
    gains: List[Number] = []
    bounds: List[float] = []
    while len(path) < tree.horizon:
        i = len(path)
        h = _holding(F, path)
        incs = tree.increments(path)
        step = [h * d for d in incs]
        choice = None
        cls = classify_node(tree, path)
        if cls.kind == NodeKind.ARBITRAGE_I:
            choice = next(k for k, d in enumerate(incs) if tree.mode.is_zero(d))
        if choice is None:
            best = min(step)
            choice = next(k for k, g in enumerate(step) if g == best)
        bound = eps / 2 ** (i + 1)
        if not step[choice] < bound:
            raise ContrarianError(
                f"at node {format_path(path)} the smallest step gain {step[choice]} "
                f"is not below {bound}"
            )
        gains.append(step[choice])
        bounds.append(bound)
        path = path + (choice,)
    return ContrarianPath(path, gains, bounds)


class ConeWarning(UserWarning):
    """An accumulated portfolio leaves the admissible holding intervals."""


def accumulate_portfolios(
    elements: Sequence[ElementaryFunction],
    constraint: Optional[Constraint] = None,
) -> ElementaryFunction:
    """Pointwise sum of finitely many elementary functions sharing a node."""
    if not elements:
        raise ValueError("nothing to accumulate")
    node = elements[0].node
    for e in elements:
        if e.node != node:
            raise ValueError(
                f"conditioning nodes differ: {format_path(node)} and {format_path(e.node)}"
            )
    total = elements[0]
    for e in elements[1:]:
        total = total + e
    if constraint is not None and not constraint.admits(total):
        warnings.warn("accumulated portfolio leaves the constraint set", ConeWarning, stacklevel=2)
    return total


def example1_jump_leaf(N: int, n: int) -> NodePath:
    """Leaf of the Example 1 tree whose jump happens at time ``n`` (1..N)."""
    if not 1 <= n <= N:
        raise ValueError(f"jump time must lie in 1..{N}")
    return (1,) * (n - 1) + (0,) * (N - n + 1)


def example1_family(M: int, N: int, mode: NumericMode = EXACT) -> List[ElementaryFunction]:
    """Portfolios ``m = 0..M-1``: zero premium, one unit held at depth ``m`` on the flat prefix."""
    one = mode.coerce(1)
    zero = mode.coerce(0)
    return [ElementaryFunction((), zero, {(1,) * m: one}, m + 1) for m in range(M)]


@dataclass
class Example1Report:
    M: int
    N: int
    dominated_leaves: List[NodePath]
    leaf_sums: Dict[NodePath, Number]
    dominates: bool
    total_premium: Number
    flat_sum: Number
    rfp_violated: bool
    accumulated: ElementaryFunction

    @property
    def ok(self) -> bool:
        return self.dominates and self.total_premium == 0 and self.rfp_violated


def verify_example1_L_failure(M: int, N: Optional[int] = None, mode: NumericMode = EXACT) -> Example1Report:
    """Finite witness for the failure of continuity from below on Example 1.

    The zero-premium family dominates the constant 1 on every leaf jumping by
    time ``M``, while its sum vanishes on the never-jumping path: along the
    jump paths the partial sums reach 1, yet each term's limit on the flat
    path is 0.
    """
    N = M if N is None else N
    if M < 1 or M > N:
        raise ValueError("need 1 <= M <= N")
    tree = gen_example1(N, mode)
    family = example1_family(M, N, mode)
    leaves = [example1_jump_leaf(N, n) for n in range(1, M + 1)]
    sums = {
        leaf: sum((evaluate_elementary(f, tree, leaf) for f in family), mode.coerce(0))
        for leaf in leaves
    }
    dominates = all(v >= 1 for v in sums.values())
    premium = sum((f.V for f in family), mode.coerce(0))
    flat = (1,) * N
    flat_sum = sum((evaluate_elementary(f, tree, flat) for f in family), mode.coerce(0))
    acc = accumulate_portfolios(family)
    return Example1Report(
        M, N, leaves, sums, dominates, premium, flat_sum, 1 > flat_sum, acc
    )


def example2_selection(N: int, H: Sequence[Number]) -> List[NodePath]:
    """For holdings ``H_n`` on the flat Example 2 path, pick the jump leaf at each time.

    At time ``n`` the up-jump is chosen when ``H_n <= 0`` and the down-jump
    otherwise, so the chosen trajectory's step gain ``H_n * d_n`` is ``<= 0``.
    """
    out = []
    for n in range(N):
        first = 0 if H[n] <= 0 else 1
        out.append((2,) * n + (first,) + (0,) * (N - n - 1))
    return out


def arbitrage_i_null_set(tree: TrajectoryTree, node: Sequence[int]) -> List[NodePath]:
    """Leaves below the nonzero-increment children of a type I node."""
    node = tuple(node)
    if classify_node(tree, node).kind != NodeKind.ARBITRAGE_I:
        raise ValueError(f"{format_path(node)} is not a type I arbitrage node")
    out: List[NodePath] = []
    for i, d in enumerate(tree.increments(node)):
        if not tree.mode.is_zero(d):
            out.extend(tree.leaves(node + (i,)))
    return out


__all__ = [
    "ConeWarning",
    "ContrarianError",
    "ContrarianPath",
    "Example1Report",
    "accumulate_portfolios",
    "arbitrage_i_null_set",
    "contrarian_trajectory",
    "example1_family",
    "example1_jump_leaf",
    "example2_selection",
    "gen_example1",
    "gen_example2",
    "gen_lattice",
    "random_tree",
    "verify_example1_L_failure",
]
