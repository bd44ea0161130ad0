"""Price processes, the tower property and trajectorial martingales."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .elementary import UNRESTRICTED, Constraint
from .extreal import Number, ext_add, ext_neg, is_finite
from .measure import check_integrable
from .payoff import PayoffLike, as_values, indicator, negate
from .superhedge import backward, conditional_norm, node_minimax, solve
from .tree import NodePath, TrajectoryTree, format_path

MODES = ("upper", "lower", "integral")


class NotIntegrableError(ValueError):
    """The payoff has no conditional integral at some node."""


@dataclass(frozen=True)
class PriceProcess:
    """One value per node: the conditional upper, lower or plain integral of a payoff."""

    values: Mapping[NodePath, Number] = field(hash=False)
    mode: str
    payoff: str = ""

    def at(self, path: Sequence[int]) -> Number:
        return self.values[tuple(path)]

    def at_depth(self, depth: int) -> Dict[NodePath, Number]:
        return {p: v for p, v in self.values.items() if len(p) == depth}


def price_process(
    tree: TrajectoryTree,
    f: PayoffLike,
    mode: str = "upper",
    constraint: Constraint = UNRESTRICTED,
) -> PriceProcess:
    """Conditional upper, lower or plain integral of ``f`` at every node.

    In ``integral`` mode the payoff must be integrable at every depth; at the
    null exceptional nodes where the upper and lower values differ, the upper
    value is recorded.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    vals = as_values(tree, f)
    desc = getattr(f, "describe", lambda: "")()
    if mode == "upper":
        return PriceProcess(solve(tree, vals, (), constraint).values, mode, desc)
    low = {p: ext_neg(v) for p, v in solve(tree, negate(vals), (), constraint).values.items()}
    if mode == "lower":
        return PriceProcess(low, mode, desc)
    up = solve(tree, vals, (), constraint).values
    for j in range(tree.horizon + 1):
        rep = check_integrable(tree, vals, j, constraint)
        if not rep.integrable:
            bad = rep.exceptional[0]
            raise NotIntegrableError(
                f"payoff is not integrable at depth {j}: node {format_path(bad)} has "
                f"upper {up[bad]} and lower {low[bad]}"
            )
    return PriceProcess(up, mode, desc)


def _lift_lower(tree, terminal, k, constraint):
    neg = {p: ext_neg(v) for p, v in terminal.items()}
    return {p: ext_neg(v) for p, v in backward(tree, neg, k, constraint).values.items()}


@dataclass
class TowerReport:
    j: int
    k: int
    chain: Dict[NodePath, Tuple[Number, ...]]
    chain_alt: Dict[NodePath, Tuple[Number, ...]]
    ordered: bool
    violations: List[Tuple[NodePath, int]]
    integrable: bool
    equality: Optional[bool]
    fixed_point: Optional[bool]


def verify_tower(
    tree: TrajectoryTree,
    f: PayoffLike,
    j: int,
    k: int,
    constraint: Constraint = UNRESTRICTED,
) -> TowerReport:
    """Check the iterated-conditioning inequalities at every depth-``j`` node.

    ``chain`` is ``(lower_j f, lower_j[lower_k f], lower_j[upper_k f],
    upper_j[upper_k f], upper_j f)`` and ``chain_alt`` has
    ``upper_j[lower_k f]`` in the middle; both must be nondecreasing.  For
    payoffs integrable at depths ``j`` and ``k`` the iterated integral must
    equal the direct one, and the depth-``j`` integral process must be fixed by
    conditioning at depth ``k``.
    """
    if not 0 <= j <= k <= tree.horizon:
        raise ValueError(f"need 0 <= j <= k <= {tree.horizon}")
    mode = tree.mode
    vals = as_values(tree, f)
    up = solve(tree, vals, (), constraint).values
    low = {p: ext_neg(v) for p, v in solve(tree, negate(vals), (), constraint).values.items()}
    up_k = {p: up[p] for p in tree.at_depth(k)}
    low_k = {p: low[p] for p in tree.at_depth(k)}
    up_up = backward(tree, up_k, k, constraint).values
    up_low = backward(tree, low_k, k, constraint).values
    low_up = _lift_lower(tree, up_k, k, constraint)
    low_low = _lift_lower(tree, low_k, k, constraint)

    chain, alt, violations = {}, {}, []
    for p in tree.at_depth(j):
        c = (low[p], low_low[p], low_up[p], up_up[p], up[p])
        a = (low[p], low_low[p], up_low[p], up_up[p], up[p])
        chain[p], alt[p] = c, a
        for i in range(4):
            if not mode.leq(c[i], c[i + 1]) or not mode.leq(a[i], a[i + 1]):
                violations.append((p, i))

    rep_j = check_integrable(tree, vals, j, constraint)
    rep_k = check_integrable(tree, vals, k, constraint)
    integrable = rep_j.integrable and rep_k.integrable
    equality = fixed = None
    if integrable:
        equality = all(
            _close(mode, up_up[p], up[p]) and _close(mode, low_up[p], up[p])
            for p in tree.at_depth(j)
            if p not in rep_j.exceptional
        )
        lifted = {q: up[q[:j]] for q in tree.at_depth(k)}
        hi = backward(tree, lifted, k, constraint).values
        lo = _lift_lower(tree, lifted, k, constraint)
        fixed = all(
            _close(mode, hi[q], lifted[q]) and _close(mode, lo[q], lifted[q])
            for q in tree.at_depth(k)
        )
    return TowerReport(j, k, chain, alt, not violations, violations, integrable, equality, fixed)


def _close(mode, a: Number, b: Number) -> bool:
    if a == b:
        return True
    return is_finite(a) and is_finite(b) and mode.close(a, b)


class ProcessKind(str, enum.Enum):
    MARTINGALE = "martingale"
    SUPERMARTINGALE = "supermartingale"
    SUBMARTINGALE = "submartingale"
    NONE = "none"

    def __str__(self) -> str:
        return self.value


@dataclass
class ProcessClassification:
    kind: ProcessKind
    is_super: bool
    is_sub: bool
    is_martingale: bool
    one_step: Dict[NodePath, Tuple[Number, Number, Number]]
    null_nodes: List[NodePath]


def null_nodes(tree: TrajectoryTree) -> List[NodePath]:
    """Nodes whose conditional space is a null set at the root."""
    out = []
    for p in tree.nodes():
        if not p:
            continue
        norm = conditional_norm(tree, indicator(tree.leaves(p)), ())
        if is_finite(norm) and tree.mode.is_zero(norm):
            out.append(p)
    return out


def classify_process(
    tree: TrajectoryTree,
    p: PriceProcess,
    constraint: Constraint = UNRESTRICTED,
    nulls: Optional[Sequence[NodePath]] = None,
) -> ProcessClassification:
    """Compare each value with the one-step conditional integrals of the next values.

    Super: ``upper_j f_{j+1} <= f_j``.  Sub: ``f_j <= lower_j f_{j+1}``.
    Martingale: both one-step integrals equal ``f_j``.  Nodes with a null
    conditional space are skipped; pass ``nulls`` to reuse a previous
    :func:`null_nodes` result.
    """
    mode = tree.mode
    nulls = null_nodes(tree) if nulls is None else list(nulls)
    skip = set(nulls)
    one_step: Dict[NodePath, Tuple[Number, Number, Number]] = {}
    is_super = is_sub = is_mart = True
    for q in tree.interior():
        if q in skip:
            continue
        here = tree.node(q)
        d = [c.value - here.value for c in here.children]
        nxt = [p.values[q + (i,)] for i in range(len(here.children))]
        lo, hi = constraint.bounds(len(q))
        upper = node_minimax(list(zip(d, nxt)), lo, hi, mode).value
        lower = ext_neg(node_minimax(list(zip(d, [ext_neg(v) for v in nxt])), lo, hi, mode).value)
        fj = p.values[q]
        one_step[q] = (lower, fj, upper)
        s = mode.leq(upper, fj)
        b = mode.leq(fj, lower)
        is_super &= s
        is_sub &= b
        is_mart &= _close(mode, upper, fj) and _close(mode, lower, fj)
    if is_mart:
        kind = ProcessKind.MARTINGALE
    elif is_super:
        kind = ProcessKind.SUPERMARTINGALE
    elif is_sub:
        kind = ProcessKind.SUBMARTINGALE
    else:
        kind = ProcessKind.NONE
    return ProcessClassification(kind, is_super, is_sub, is_mart, one_step, nulls)


__all__ = [
    "NotIntegrableError",
    "PriceProcess",
    "ProcessClassification",
    "ProcessKind",
    "TowerReport",
    "classify_process",
    "null_nodes",
    "price_process",
    "verify_tower",
]
