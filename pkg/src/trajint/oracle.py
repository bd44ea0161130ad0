"""Independent brute-force evaluators used to cross-check the recursion.

None of these share code with the exact node solver: the grid oracle scans
holdings, the dual oracle maximises over martingale measures on two-point
supports, the enumeration oracle searches sums of nonnegative elementary
functions, and the LP oracle solves the whole-tree superhedging program with
an off-the-shelf solver.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from ._kernels import grid_scan
from .elementary import UNRESTRICTED, Constraint
from .extreal import INF, NEG_INF, Number
from .payoff import PayoffLike, as_values
from .tree import NodePath, TrajectoryTree, format_path

MAX_GRID_POINTS = 10**7
DEFAULT_ENUM_BUDGET = 10**6


class OracleError(RuntimeError):
    """The oracle cannot evaluate this instance (size or feasibility)."""


def _check_small(tree: TrajectoryTree, node: NodePath, depth: int, branching: int) -> None:
    if tree.horizon - len(node) > depth:
        raise OracleError(f"subtree deeper than {depth} levels")
    for p in tree.interior(node):
        if len(tree.node(p).children) > branching:
            raise OracleError(f"node {format_path(p)} has more than {branching} children")


def _grid_node(deltas, values, lo, hi, step, refine):
    """Smallest grid value of ``max_k (v_k - h d_k)`` over ``h`` in ``[lo, hi]``."""
    live = [(d, v) for d, v in zip(deltas, values) if v != -math.inf]
    if not live:
        return -math.inf
    ds = [d for d, _ in live]
    vs = [v for _, v in live]
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    if n > MAX_GRID_POINTS:
        raise OracleError(f"grid of {n} points exceeds the {MAX_GRID_POINTS} limit")
    best, i = grid_scan(ds, vs, lo, step, n)
    h = lo + i * step
    s = step
    for _ in range(refine):
        a = max(lo, h - s)
        b = min(hi, h + s)
        s = (b - a) / 2000 if b > a else s
        if s <= 0:
            break
        val, j = grid_scan(ds, vs, a, s, 2001)
        if val < best:
            best, h = val, a + j * s
    return best


def grid_superhedge(
    tree: TrajectoryTree,
    f: PayoffLike,
    node: Sequence[int] = (),
    h_range: Tuple[float, float] = (-100.0, 100.0),
    step: float = 1e-4,
    refine: int = 2,
    constraint: Constraint = UNRESTRICTED,
) -> float:
    """Grid search over per-node holdings, in floating point.

    The superhedging program separates across children once the holdings of
    the deeper nodes are fixed, so the exhaustive search over the product grid
    is carried out node by node from the leaves upward.  ``refine`` extra
    passes rescan a finer grid around the best coarse point.  The result is an
    upper bound on the true value for holdings restricted to ``h_range``.
    """
    node = tuple(node)
    _check_small(tree, node, 4, 4)
    vals = {k: float(v) for k, v in as_values(tree, f).items()}
    u: Dict[NodePath, float] = {leaf: vals[leaf] for leaf in tree.leaves(node)}
    for p in sorted(tree.interior(node), key=len, reverse=True):
        here = float(tree.node(p).value)
        kids = tree.node(p).children
        deltas = [float(c.value) - here for c in kids]
        values = [u[p + (i,)] for i in range(len(kids))]
        clo, chi = constraint.bounds(len(p))
        lo = max(h_range[0], float(clo))
        hi = min(h_range[1], float(chi))
        u[p] = _grid_node(deltas, values, lo, hi, step, refine)
    return u[node]


def martingale_measure_value(
    children: Sequence[Tuple[Number, Number]], eps: float = 1e-9
) -> Number:
    """``max sum_k p_k v_k`` over probability vectors with ``sum_k p_k d_k = 0``.

    The optimum of this two-constraint linear program sits on a support of at
    most two points, so Dirac masses on zero increments and two-point supports
    straddling zero are enumerated.
    """
    def zero(d):
        return d == 0 if eps == 0 else abs(d) <= eps

    best = None
    for d, v in children:
        if zero(d):
            best = v if best is None else max(best, v)
    for (di, vi), (dk, vk) in itertools.permutations(children, 2):
        if zero(di) or zero(dk) or not (di < 0 < dk):
            continue
        pi = dk / (dk - di)
        pk = -di / (dk - di)
        if INF in (vi, vk):
            val = INF
        elif NEG_INF in (vi, vk):
            val = NEG_INF
        else:
            val = pi * vi + pk * vk
        best = val if best is None else max(best, val)
    if best is None:
        raise OracleError("no martingale measure: the node is a type II arbitrage node")
    return best


def dual_upper_integral(
    tree: TrajectoryTree, f: PayoffLike, node: Sequence[int] = ()
) -> Number:
    """Backward recursion of one-step martingale-measure maximisations."""
    node = tuple(node)
    eps = 0 if tree.mode.exact else tree.mode.eps
    vals = as_values(tree, f)
    u: Dict[NodePath, Number] = {leaf: vals[leaf] for leaf in tree.leaves(node)}
    for p in sorted(tree.interior(node), key=len, reverse=True):
        here = tree.node(p)
        pts = [(c.value - here.value, u[p + (i,)]) for i, c in enumerate(here.children)]
        try:
            u[p] = martingale_measure_value(pts, eps)
        except OracleError as exc:
            raise OracleError(f"{exc} (at {format_path(p)})") from None
    return u[node]


def _gains_matrix(tree: TrajectoryTree, node: NodePath):
    interior = tree.interior(node)
    leaves = tree.leaves(node)
    # incidence[l, i] = increment at interior node i along leaf l (0 if off path)
    inc = np.zeros((len(leaves), len(interior)))
    col = {p: i for i, p in enumerate(interior)}
    for r, leaf in enumerate(leaves):
        prices = tree.price_path(leaf)
        for i in range(len(node), tree.horizon):
            inc[r, col[leaf[:i]]] = float(prices[i + 1] - prices[i])
    return interior, leaves, inc


def enumerate_superpositions(
    tree: TrajectoryTree,
    f: PayoffLike,
    node: Sequence[int] = (),
    M: int = 1,
    coefficient_grid: Sequence[float] = tuple(np.linspace(-2, 2, 9)),
    budget: int = DEFAULT_ENUM_BUDGET,
) -> float:
    """Least total premium of ``M`` nonnegative grid elementary functions dominating ``f``.

    Each term picks a holding from ``coefficient_grid`` at every interior node
    and the smallest initial value keeping it nonnegative.  For a multiset of
    terms the cheapest premiums satisfying both the per-term nonnegativity and
    the joint domination sum to ``max(sum Vmin, max_leaf(f - sum gains))``.
    """
    node = tuple(node)
    _check_small(tree, node, 2, 3)
    if not 1 <= M <= 3:
        raise OracleError("M must be between 1 and 3")
    grid = sorted({float(g) for g in coefficient_grid} | {0.0})
    interior, leaves, inc = _gains_matrix(tree, node)
    n_vec = len(grid) ** len(interior)
    n_combo = math.comb(n_vec + M - 1, M)
    if n_combo > budget:
        raise OracleError(f"{n_combo} combinations exceed the budget of {budget}")
    fv = np.array([float(as_values(tree, f)[leaf]) for leaf in leaves])
    H = np.array(list(itertools.product(grid, repeat=len(interior))))
    gains = H @ inc.T  # (n_vec, n_leaves)
    vmin = (-gains).max(axis=1)
    best = math.inf
    for head in itertools.combinations_with_replacement(range(len(H)), M - 1):
        start = head[-1] if head else 0
        g_head = gains[list(head)].sum(axis=0) if head else np.zeros(len(leaves))
        v_head = float(vmin[list(head)].sum()) if head else 0.0
        g_tail = gains[start:] + g_head
        v_tail = vmin[start:] + v_head
        premium = np.maximum(v_tail, (fv[None, :] - g_tail).max(axis=1))
        best = min(best, float(premium.min()))
    return best


@dataclass(frozen=True)
class LPResult:
    value: float
    V: Optional[float]
    holdings: Dict[NodePath, float]
    status: str


def lp_superhedge(
    tree: TrajectoryTree,
    f: PayoffLike,
    node: Sequence[int] = (),
    constraint: Constraint = UNRESTRICTED,
) -> LPResult:
    """Single-portfolio superhedging linear program over the whole subtree.

    Minimise ``V`` subject to ``V + sum_i H_i d_i >= f`` on every conditional
    leaf.  Leaves with ``f = -inf`` impose nothing; a leaf with ``f = +inf``
    makes the program infeasible (value ``+inf``) since no single portfolio
    dominates it.
    """
    node = tuple(node)
    interior, leaves, inc = _gains_matrix(tree, node)
    vals = as_values(tree, f)
    rows, rhs = [], []
    for r, leaf in enumerate(leaves):
        v = vals[leaf]
        if v == NEG_INF:
            continue
        if v == INF:
            return LPResult(math.inf, None, {}, "infeasible")
        rows.append(np.concatenate(([-1.0], -inc[r])))
        rhs.append(-float(v))
    nvar = 1 + len(interior)
    c = np.zeros(nvar)
    c[0] = 1.0
    bounds = [(None, None)]
    for p in interior:
        lo, hi = constraint.bounds(len(p))
        bounds.append((None if lo == NEG_INF else float(lo), None if hi == INF else float(hi)))
    if not rows:
        return LPResult(-math.inf, None, {}, "unbounded")
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds, method="highs")
    if res.status == 3:
        return LPResult(-math.inf, None, {}, "unbounded")
    if res.status != 0:
        raise OracleError(f"linear program failed: {res.message}")
    hold = {p: float(x) for p, x in zip(interior, res.x[1:])}
    return LPResult(float(res.fun), float(res.x[0]), hold, "optimal")


__all__ = [
    "LPResult",
    "OracleError",
    "dual_upper_integral",
    "enumerate_superpositions",
    "grid_superhedge",
    "lp_superhedge",
    "martingale_measure_value",
]
