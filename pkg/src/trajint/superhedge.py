"""Conditional upper/lower integrals and norms by backward minimax recursion.

At an interior node with child increments ``d_k`` and continuation values
``v_k`` the recursion takes

    u = inf_{h in [lo, hi]} max_k (v_k - h * d_k),

which is a one-dimensional convex piecewise-linear program.  Infinite
continuation values are handled through the limits ``h -> +-inf``; this is
what makes indicator functions below type I arbitrage nodes null and sends
every value at a type II node to ``-inf``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ._kernels import ATTAINED, pl_minimize_float, pl_minimize_generic
from .classify import NodeKind, classify_node
from .elementary import UNRESTRICTED, Constraint, ElementaryFunction, evaluate_elementary
from .extreal import INF, NEG_INF, Number, is_finite
from .payoff import LeafValues, PayoffLike, absolute, as_values, negate
from .tree import EXACT, NodePath, NumericMode, TrajectoryTree, format_path


@dataclass(frozen=True)
class NodeSolve:
    """Result of one node program.  ``minimizer`` is ``None`` when the infimum is not attained."""

    points: Tuple[Tuple[Number, Number], ...]
    lo: Number
    hi: Number
    value: Number
    minimizer: Optional[Number]

    @property
    def attained(self) -> bool:
        return self.minimizer is not None


def _limit(points, direction: int, sign) -> Number:
    """Limit of ``max_k (v_k - h d_k)`` as ``h -> direction * inf``."""
    best = NEG_INF
    for d, v in points:
        s = sign(d) * direction
        if s > 0:
            term = NEG_INF
        elif s == 0:
            term = v
        else:
            term = INF
        if term > best:
            best = term
    return best


def node_minimax(
    points: Sequence[Tuple[Number, Number]],
    lo: Number = NEG_INF,
    hi: Number = INF,
    mode: NumericMode = EXACT,
) -> NodeSolve:
    """Minimise ``h -> max_k (v_k - h * d_k)`` over ``lo <= h <= hi``.

    ``points`` holds ``(d_k, v_k)`` pairs with finite increments and
    extended-real values.
    """
    if not points:
        raise ValueError("node_minimax needs at least one point")
    if lo > hi:
        raise ValueError("empty holding interval")
    pts = tuple((d, v) for d, v in points)
    zero = mode.coerce(0)
    clamp0 = min(max(zero, lo), hi)
    live = [(d, v) for d, v in pts if v != NEG_INF]
    if not live:
        return NodeSolve(pts, lo, hi, NEG_INF, clamp0)

    if any(v == INF for _, v in live):
        value = INF
        if hi == INF:
            value = min(value, _limit(live, 1, mode.sign))
        if lo == NEG_INF:
            value = min(value, _limit(live, -1, mode.sign))
        return NodeSolve(pts, lo, hi, value, clamp0 if value == INF else None)

    ds = [d for d, _ in live]
    vs = [v for _, v in live]
    if mode.exact:
        value, h, status = pl_minimize_generic(ds, vs, lo, hi, 0)
    else:
        value, h, status = pl_minimize_float(
            [float(d) for d in ds], [float(v) for v in vs], float(lo), float(hi), mode.eps
        )
    if status != ATTAINED:
        return NodeSolve(pts, lo, hi, NEG_INF, None)
    return NodeSolve(pts, lo, hi, value, h)


@dataclass
class DPResult:
    """Node values of a backward recursion over the subtree of ``node``."""

    node: NodePath
    values: Dict[NodePath, Number]
    solves: Dict[NodePath, NodeSolve] = field(default_factory=dict)
    constrained_type_ii: List[NodePath] = field(default_factory=list)

    @property
    def value(self) -> Number:
        return self.values[self.node]


def backward(
    tree: TrajectoryTree,
    terminal: Mapping[NodePath, Number],
    depth: Optional[int] = None,
    constraint: Constraint = UNRESTRICTED,
    node: Sequence[int] = (),
) -> DPResult:
    """Run the recursion from values given on the depth-``depth`` nodes below ``node``.

    ``terminal`` maps each depth-``depth`` node under ``node`` to its value.
    With ``depth = horizon`` this is the superhedging recursion for a payoff.
    """
    node = tuple(node)
    k = tree.horizon if depth is None else depth
    if not len(node) <= k <= tree.horizon:
        raise ValueError(f"depth {k} must lie between {len(node)} and {tree.horizon}")
    mode = tree.mode
    values: Dict[NodePath, Number] = {}
    solves: Dict[NodePath, NodeSolve] = {}
    flagged: List[NodePath] = []
    paths = [p for p in tree.subtree(node) if len(p) <= k]
    for p in paths:
        if len(p) == k:
            try:
                values[p] = terminal[p]
            except KeyError:
                raise KeyError(f"no terminal value for {format_path(p)}") from None
    for p in sorted((p for p in paths if len(p) < k), key=len, reverse=True):
        here = tree.node(p).value
        kids = tree.node(p).children
        pts = [(c.value - here, values[p + (i,)]) for i, c in enumerate(kids)]
        lo, hi = constraint.bounds(len(p))
        s = node_minimax(pts, lo, hi, mode)
        solves[p] = s
        values[p] = s.value
        if (lo, hi) != (NEG_INF, INF) and s.value != NEG_INF:
            if classify_node(tree, p).kind == NodeKind.ARBITRAGE_II:
                flagged.append(p)
    return DPResult(node, values, solves, flagged)


def solve(
    tree: TrajectoryTree,
    f: PayoffLike,
    node: Sequence[int] = (),
    constraint: Constraint = UNRESTRICTED,
) -> DPResult:
    """Upper-integral recursion for ``f`` over the subtree of ``node``."""
    vals = f if isinstance(f, dict) and _is_leaf_values(tree, f) else as_values(tree, f)
    return backward(tree, vals, tree.horizon, constraint, node)


def _is_leaf_values(tree: TrajectoryTree, f: dict) -> bool:
    return len(f) == len(tree.all_leaves) and all(len(k) == tree.horizon for k in f)


def upper_integral(
    tree: TrajectoryTree,
    f: PayoffLike,
    node: Sequence[int] = (),
    constraint: Constraint = UNRESTRICTED,
) -> Number:
    """Conditional upper integral of ``f`` at ``node``."""
    return solve(tree, f, node, constraint).value


def lower_integral(
    tree: TrajectoryTree,
    f: PayoffLike,
    node: Sequence[int] = (),
    constraint: Constraint = UNRESTRICTED,
) -> Number:
    """Conditional lower integral, ``-upper(-f)``."""
    return -upper_integral(tree, negate(as_values(tree, f)), node, constraint)


def ibar(
    tree: TrajectoryTree,
    f: PayoffLike,
    node: Sequence[int] = (),
    constraint: Constraint = UNRESTRICTED,
) -> Number:
    """Conditional norm functional of a nonnegative payoff.

    For ``f >= 0`` on a finite tree any single dominating elementary function
    is itself nonnegative, and countable sums only matter through the limit
    rule, so this coincides with the upper integral.
    """
    vals = as_values(tree, f)
    if any(x < 0 for x in vals.values()):
        raise ValueError("ibar expects a nonnegative payoff; use conditional_norm for |f|")
    return upper_integral(tree, vals, node, constraint)


def conditional_norm(
    tree: TrajectoryTree,
    f: PayoffLike,
    node: Sequence[int] = (),
    constraint: Constraint = UNRESTRICTED,
) -> Number:
    """The conditional norm of ``f`` at ``node``: the norm functional of ``|f|``."""
    return upper_integral(tree, absolute(as_values(tree, f)), node, constraint)


class CertificateError(ValueError):
    """No finite hedge certificate exists for the requested value."""


@dataclass(frozen=True)
class HedgeCertificate:
    """Finitely many elementary functions whose sum dominates a payoff on a node."""

    node: NodePath
    elements: Tuple[ElementaryFunction, ...]
    total_premium: Number
    value: Number
    slack: Number
    lower_witness: Optional[NodePath] = None

    def dominates(self, tree: TrajectoryTree, f: PayoffLike) -> bool:
        vals = as_values(tree, f)
        mode = tree.mode
        for leaf in tree.leaves(self.node):
            total = mode.coerce(0)
            for e in self.elements:
                total += evaluate_elementary(e, tree, leaf)
            if not mode.leq(vals[leaf], total):
                return False
        return True

    def verify(self, tree: TrajectoryTree, f: PayoffLike) -> bool:
        """Domination on every conditional leaf and the premium bound."""
        premium_ok = tree.mode.leq(self.total_premium, self.value + self.slack)
        return premium_ok and self.dominates(tree, f)


def _feasible_h(pts, budget, lo, hi, mode: NumericMode):
    """Interval of ``h`` in ``[lo, hi]`` with ``v_k - h d_k <= budget`` for all ``k``."""
    a, b = lo, hi
    for d, v in pts:
        if v == NEG_INF:
            continue
        if v == INF:
            return None
        if mode.is_zero(d):
            if not mode.leq(v, budget):
                return None
            continue
        bound = (v - budget) / d
        if d > 0:
            a = max(a, bound)
        else:
            b = min(b, bound)
    if a > b:
        if mode.exact or not mode.close(a, b):
            return None
        a = b = (a + b) / 2
    return a, b


def _extract(tree, dp: DPResult, leafvals, budget, constraint) -> Optional[Dict[NodePath, Number]]:
    mode = tree.mode
    holdings: Dict[NodePath, Number] = {}
    stack = [(dp.node, budget)]
    zero = mode.coerce(0)
    while stack:
        p, b = stack.pop()
        if len(p) == tree.horizon:
            if not mode.leq(leafvals[p], b):
                return None
            continue
        here = tree.node(p)
        pts = [(c.value - here.value, dp.values[p + (i,)]) for i, c in enumerate(here.children)]
        lo, hi = constraint.bounds(len(p))
        iv = _feasible_h(pts, b, lo, hi, mode)
        if iv is None:
            return None
        h = min(max(zero, iv[0]), iv[1])
        if h != 0:
            holdings[p] = h
        for i, (d, _) in enumerate(pts):
            stack.append((p + (i,), b + h * d))
    return holdings


def hedge_certificate(
    tree: TrajectoryTree,
    f: PayoffLike,
    node: Sequence[int] = (),
    constraint: Constraint = UNRESTRICTED,
    slack: Number = 0,
) -> HedgeCertificate:
    """Extract a single dominating elementary function priced within ``slack`` of the value."""
    node = tuple(node)
    leafvals = as_values(tree, f)
    dp = solve(tree, leafvals, node, constraint)
    value = dp.value
    if not is_finite(value):
        raise CertificateError(
            f"value at {format_path(node)} is {value}; no finite certificate exists"
        )
    mode = tree.mode
    slack = mode.coerce(slack)
    tries = [mode.coerce(0)]
    if slack > 0:
        tries.append(slack)
    if not mode.exact:
        tries.append(max(slack, mode.eps * max(1.0, abs(float(value)))))
    for s in tries:
        hold = _extract(tree, dp, leafvals, value + s, constraint)
        if hold is not None:
            elem = ElementaryFunction(node, value + s, hold, tree.horizon)
            elements = () if elem.is_zero() else (elem,)
            return HedgeCertificate(node, elements, value + s, value, max(s, slack))
    raise CertificateError(
        f"no finite certificate within slack {slack} at {format_path(node)}"
    )


def value_at_depth(
    tree: TrajectoryTree,
    f: PayoffLike,
    depth: int,
    lower: bool = False,
    constraint: Constraint = UNRESTRICTED,
) -> Dict[NodePath, Number]:
    """Upper (or lower) integral of ``f`` at every node of the given depth."""
    vals = as_values(tree, f)
    if lower:
        up = solve(tree, negate(vals), (), constraint).values
        return {p: -up[p] for p in tree.at_depth(depth)}
    up = solve(tree, vals, (), constraint).values
    return {p: up[p] for p in tree.at_depth(depth)}


__all__ = [
    "CertificateError",
    "DPResult",
    "HedgeCertificate",
    "NodeSolve",
    "backward",
    "conditional_norm",
    "hedge_certificate",
    "ibar",
    "lower_integral",
    "node_minimax",
    "solve",
    "upper_integral",
    "value_at_depth",
]
