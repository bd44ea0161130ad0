"""Elementary functions ``V + sum_i H_i * (S_{i+1} - S_i)`` and related checks."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .classify import type_ii_below
from .extreal import INF, NEG_INF, Number
from .tree import NodePath, NumericMode, TrajectoryTree, format_path


class ConditioningError(ValueError):
    """A leaf or element does not belong to the expected conditional space."""


@dataclass(frozen=True)
class ElementaryFunction:
    """Initial value ``V`` at ``node`` plus the gains of ``holdings`` up to ``maturity``.

    ``holdings`` maps interior node paths (depth ``j .. maturity - 1`` under
    ``node``) to positions; missing nodes hold nothing.  Keying positions on
    node paths makes them nonanticipative by construction.
    """

    node: NodePath
    V: Number
    holdings: Mapping[NodePath, Number] = field(default_factory=dict, hash=False)
    maturity: Optional[int] = None

    def __post_init__(self) -> None:
        node = tuple(self.node)
        object.__setattr__(self, "node", node)
        hold = {tuple(k): v for k, v in self.holdings.items()}
        object.__setattr__(self, "holdings", hold)
        j = len(node)
        top = max((len(k) + 1 for k in hold), default=j)
        n = top if self.maturity is None else int(self.maturity)
        if n < j:
            raise ValueError("maturity precedes the conditioning depth")
        for k in hold:
            if k[:j] != node:
                raise ConditioningError(f"holding at {format_path(k)} is outside {format_path(node)}")
            if not j <= len(k) < n:
                raise ValueError(f"holding at {format_path(k)} is outside depths {j}..{n - 1}")
        object.__setattr__(self, "maturity", n)

    @property
    def start(self) -> int:
        return len(self.node)

    def h(self, path: Sequence[int]) -> Number:
        return self.holdings.get(tuple(path), 0)

    def evaluate(self, tree: TrajectoryTree, leaf: Sequence[int]) -> Number:
        return evaluate_elementary(self, tree, leaf)

    def leaf_values(self, tree: TrajectoryTree) -> Dict[NodePath, Number]:
        """Values on the conditional leaves of ``node``."""
        return {leaf: evaluate_elementary(self, tree, leaf) for leaf in tree.leaves(self.node)}

    def as_payoff_values(self, tree: TrajectoryTree, outside: Number = 0) -> Dict[NodePath, Number]:
        """Values on every leaf, ``outside`` off the conditional space."""
        vals = self.leaf_values(tree)
        fill = tree.mode.coerce(outside) if math.isfinite(outside) else outside
        return {leaf: vals.get(leaf, fill) for leaf in tree.all_leaves}

    def __add__(self, other: "ElementaryFunction") -> "ElementaryFunction":
        if other.node != self.node:
            raise ConditioningError("elementary functions must share a conditioning node")
        hold = dict(self.holdings)
        for k, v in other.holdings.items():
            hold[k] = hold.get(k, 0) + v
        return ElementaryFunction(self.node, self.V + other.V, hold, max(self.maturity, other.maturity))

    def scale(self, c: Number) -> "ElementaryFunction":
        return ElementaryFunction(
            self.node, c * self.V, {k: c * v for k, v in self.holdings.items()}, self.maturity
        )

    def __neg__(self) -> "ElementaryFunction":
        return self.scale(-1)

    def __sub__(self, other: "ElementaryFunction") -> "ElementaryFunction":
        return self + (-other)

    def is_zero(self) -> bool:
        return self.V == 0 and all(v == 0 for v in self.holdings.values())


def evaluate_elementary(p: ElementaryFunction, tree: TrajectoryTree, leaf: Sequence[int]) -> Number:
    """``V`` plus the holdings-weighted increments from depth ``j`` to ``maturity``."""
    leaf = tuple(leaf)
    j, n = p.start, p.maturity
    if leaf[:j] != p.node or len(leaf) < n:
        raise ConditioningError(f"{format_path(leaf)} is not below {format_path(p.node)}")
    prices = tree.price_path(leaf[:n])
    total = tree.mode.coerce(p.V)
    for i in range(j, n):
        hi = p.holdings.get(leaf[:i])
        if hi:
            total += hi * (prices[i + 1] - prices[i])
    return total


def partial_value(p: ElementaryFunction, tree: TrajectoryTree, path: Sequence[int]) -> Number:
    """``V`` plus the gains accrued along ``path`` (any depth at least ``j``)."""
    path = tuple(path)
    j = p.start
    k = min(len(path), p.maturity)
    prices = tree.price_path(path[:k])
    total = tree.mode.coerce(p.V)
    for i in range(j, k):
        hi = p.holdings.get(path[:i])
        if hi:
            total += hi * (prices[i + 1] - prices[i])
    return total


@dataclass(frozen=True)
class Constraint:
    """Holding bounds ``[lo, hi]``, globally or per depth."""

    lo: Number = NEG_INF
    hi: Number = INF
    per_depth: Mapping[int, Tuple[Number, Number]] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        for lo, hi in [(self.lo, self.hi), *self.per_depth.values()]:
            if lo > hi:
                raise ValueError(f"empty holding interval [{lo}, {hi}]")
            if not lo <= 0 <= hi:
                raise ValueError(f"holding interval [{lo}, {hi}] must contain 0")

    def bounds(self, depth: int) -> Tuple[Number, Number]:
        return self.per_depth.get(depth, (self.lo, self.hi))

    @property
    def unrestricted(self) -> bool:
        return all(b == (NEG_INF, INF) for b in [(self.lo, self.hi), *self.per_depth.values()])

    @property
    def is_cone(self) -> bool:
        """True when every interval is a cone, so sums of admissible holdings stay admissible."""
        return all(
            lo in (NEG_INF, 0) and hi in (0, INF)
            for lo, hi in [(self.lo, self.hi), *self.per_depth.values()]
        )

    def admits(self, p: ElementaryFunction, mode: Optional[NumericMode] = None) -> bool:
        tol = 0 if mode is None else mode.tol()
        for k, h in p.holdings.items():
            lo, hi = self.bounds(len(k))
            if h < lo - tol or h > hi + tol:
                return False
        return True

    @classmethod
    def parse(cls, text: Optional[str], mode: NumericMode) -> "Constraint":
        if text is None or text.strip() in ("", "none", "unrestricted"):
            return cls()
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"constraint must be 'lo,hi', got {text!r}")
        lo, hi = (mode.coerce(x) for x in parts)
        return cls(lo, hi)


UNRESTRICTED = Constraint()
LONG_ONLY = Constraint(0, INF)


def elementary_integral(
    p: ElementaryFunction,
    tree: Optional[TrajectoryTree] = None,
    node: Optional[Sequence[int]] = None,
) -> Number:
    """The elementary integral: the initial value ``V``.

    When ``tree`` is supplied, a type II node below the conditioning node
    triggers a warning since the value need not be order-consistent there.
    """
    if node is not None and tuple(node) != p.node:
        raise ConditioningError(f"element is conditioned at {format_path(p.node)}, not {format_path(tuple(node))}")
    if tree is not None:
        bad = type_ii_below(tree, p.node)
        if bad:
            warnings.warn(
                f"type II arbitrage node {format_path(bad[0])} below {format_path(p.node)}; "
                "the elementary integral may not be order-consistent",
                stacklevel=2,
            )
    return p.V


@dataclass(frozen=True)
class WellPosedReport:
    nonnegative: bool
    passed: bool
    violation: Optional[Tuple[int, NodePath, Number]] = None
    note: str = ""


def check_wellposed(tree: TrajectoryTree, p: ElementaryFunction) -> WellPosedReport:
    """If ``p >= 0`` on its conditional leaves, check all partial sums and ``V`` are ``>= 0``."""
    mode = tree.mode
    zero = mode.coerce(0)
    if not all(mode.leq(zero, x) for x in p.leaf_values(tree).values()):
        return WellPosedReport(False, True, None, "not nonnegative; nothing to check")
    j = p.start
    for k in range(j, p.maturity + 1):
        for path in tree.at_depth(k):
            if path[:j] != p.node:
                continue
            x = partial_value(p, tree, path)
            if not mode.leq(zero, x):
                return WellPosedReport(
                    True,
                    False,
                    (k, path, x),
                    f"partial value {x} < 0 at {format_path(path)}",
                )
    return WellPosedReport(True, True)


def truncate(p: ElementaryFunction, k: int) -> ElementaryFunction:
    """Drop holdings at depths ``>= k``; the initial value is unchanged."""
    n = max(p.start, min(p.maturity, k))
    return ElementaryFunction(
        p.node, p.V, {q: h for q, h in p.holdings.items() if len(q) < n}, n
    )


@dataclass(frozen=True)
class AbsRepresentation:
    """Outcome of trying to write ``|p|`` as an elementary function.

    ``subsystem`` lists the rows ``(leaf, coefficients, rhs)`` of a minimal
    inconsistent subsystem when no representation exists.  Coefficients are
    keyed by ``"V"`` or by the node path whose holding multiplies the increment.
    """

    feasible: bool
    representation: Optional[ElementaryFunction]
    subsystem: List[Tuple[NodePath, Dict[object, Number], Number]] = field(default_factory=list)


def represent_abs(tree: TrajectoryTree, p: ElementaryFunction) -> AbsRepresentation:
    """Decide whether ``|p|`` is elementary by solving ``V' + sum H'_i d_i = |p|`` leaf by leaf."""
    if p.node != ():
        raise ConditioningError("represent_abs expects an element conditioned at the root")
    leaves = list(tree.all_leaves)
    unknowns: List[object] = ["V"] + tree.interior()
    col = {u: i for i, u in enumerate(unknowns)}
    rows: List[Dict[int, Number]] = []
    rhs: List[Number] = []
    for leaf in leaves:
        prices = tree.price_path(leaf)
        r = {0: tree.mode.coerce(1)}
        for i in range(tree.horizon):
            d = prices[i + 1] - prices[i]
            if d != 0:
                r[col[leaf[:i]]] = d
        rows.append(r)
        rhs.append(abs(evaluate_elementary(p, tree, leaf)))

    solve = _solve_exact if tree.mode.exact else _make_float_solver(tree.mode.eps)
    sol = solve(rows, rhs, len(unknowns), range(len(rows)))
    if sol is not None:
        hold = {u: sol[i] for u, i in col.items() if u != "V" and sol[i] != 0}
        return AbsRepresentation(True, ElementaryFunction((), sol[0], hold, tree.horizon))

    keep = list(range(len(rows)))
    for r in list(keep):
        trial = [x for x in keep if x != r]
        if solve(rows, rhs, len(unknowns), trial) is None:
            keep = trial
    subsystem = [
        (leaves[r], {unknowns[c]: a for c, a in sorted(rows[r].items())}, rhs[r]) for r in keep
    ]
    return AbsRepresentation(False, None, subsystem)


def _solve_exact(rows, rhs, ncols, which) -> Optional[List[Fraction]]:
    """Gauss-Jordan elimination over the rationals; ``None`` when inconsistent."""
    m = [[Fraction(rows[r].get(c, 0)) for c in range(ncols)] + [Fraction(rhs[r])] for r in which]
    pivots: List[int] = []
    row = 0
    for c in range(ncols):
        piv = next((i for i in range(row, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][c]
        m[row] = [x * inv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(c)
        row += 1
    if any(all(x == 0 for x in r[:ncols]) and r[ncols] != 0 for r in m[row:]):
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = m[i][ncols]
    return sol


def _make_float_solver(eps: float):
    def solve(rows, rhs, ncols, which) -> Optional[List[float]]:
        which = list(which)
        if not which:
            return [0.0] * ncols
        a = np.zeros((len(which), ncols))
        b = np.array([float(rhs[r]) for r in which])
        for i, r in enumerate(which):
            for c, x in rows[r].items():
                a[i, c] = float(x)
        x, *_ = np.linalg.lstsq(a, b, rcond=None)
        resid = np.abs(a @ x - b).max()
        if resid > eps * max(1.0, float(np.abs(b).max())) * 10:
            return None
        return [0.0 if abs(v) <= eps else float(v) for v in x]

    return solve
