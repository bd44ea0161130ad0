"""Null sets, integrability and the (L) and (K) identities on finite trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

from .elementary import UNRESTRICTED, Constraint, ElementaryFunction
from .extreal import Number, ext_add, ext_neg, is_finite
from .payoff import (
    LeafValues,
    PayoffLike,
    as_values,
    indicator,
    negate,
    negative_part,
    positive_part,
)
from .superhedge import (
    CertificateError,
    HedgeCertificate,
    conditional_norm,
    hedge_certificate,
    ibar,
    solve,
)
from .tree import NodePath, TrajectoryTree, format_path


def _is_zero(tree: TrajectoryTree, x: Number) -> bool:
    return is_finite(x) and tree.mode.is_zero(x)


@dataclass(frozen=True)
class NullReport:
    target: frozenset
    node: NodePath
    norm_value: Number
    is_null: bool
    certificate: Optional[HedgeCertificate] = None


def is_conditionally_null(
    tree: TrajectoryTree,
    E: Iterable[Sequence[int]],
    node: Sequence[int] = (),
    slack: Number = 0,
) -> NullReport:
    """Conditional norm of the indicator of the leaf set ``E`` at ``node``."""
    node = tuple(node)
    target = frozenset(tuple(x) for x in E)
    ind = indicator(target)
    norm = conditional_norm(tree, ind, node)
    cert = None
    if is_finite(norm):
        try:
            cert = hedge_certificate(tree, ind, node, slack=slack)
        except CertificateError:
            cert = None
    return NullReport(target, node, norm, _is_zero(tree, norm), cert)


def check_L_property(
    tree: TrajectoryTree, constraint: Constraint = UNRESTRICTED
) -> Dict[NodePath, bool]:
    """Whether the upper integral of the zero payoff vanishes, node by node."""
    zero = tree.mode.coerce(0)
    values = solve(tree, {leaf: zero for leaf in tree.all_leaves}, (), constraint).values
    return {p: _is_zero(tree, values[p]) for p in tree.nodes()}


@dataclass(frozen=True)
class KCheck:
    node: NodePath
    ibar_pos: Number
    integral: Number
    ibar_neg: Number
    holds: bool

    @property
    def residual(self) -> Number:
        return ext_add(self.ibar_pos, ext_neg(ext_add(self.integral, self.ibar_neg)))


def check_K_property(
    tree: TrajectoryTree,
    f: ElementaryFunction,
    node: Optional[Sequence[int]] = None,
) -> KCheck:
    """Test ``Ibar(f+) = I(f) + Ibar(f-)`` for an elementary ``f`` at its conditioning node."""
    at = f.node if node is None else tuple(node)
    if at != f.node:
        raise ValueError(f"element is conditioned at {format_path(f.node)}, not {format_path(at)}")
    vals = f.as_payoff_values(tree)
    lhs = ibar(tree, positive_part(vals), at)
    neg = ibar(tree, negative_part(vals), at)
    rhs = ext_add(f.V, neg)
    holds = lhs == rhs or (is_finite(lhs) and is_finite(rhs) and tree.mode.close(lhs, rhs))
    return KCheck(at, lhs, f.V, neg, holds)


@dataclass
class IntegrabilityReport:
    """Gap between upper and lower integrals at every node of one depth."""

    depth: int
    upper: Dict[NodePath, Number]
    lower: Dict[NodePath, Number]
    gap: Dict[NodePath, Number]
    exceptional: List[NodePath]
    exception_norm: Number
    integrable: bool
    integral_value: Dict[NodePath, Number] = field(default_factory=dict)


def integral_bounds(
    tree: TrajectoryTree, f: PayoffLike, constraint: Constraint = UNRESTRICTED
):
    """Upper and lower integral of ``f`` at every node of the tree."""
    vals = as_values(tree, f)
    up = solve(tree, vals, (), constraint).values
    low_neg = solve(tree, negate(vals), (), constraint).values
    return up, {p: ext_neg(v) for p, v in low_neg.items()}


def check_integrable(
    tree: TrajectoryTree,
    f: PayoffLike,
    j: int,
    constraint: Constraint = UNRESTRICTED,
) -> IntegrabilityReport:
    """Integrability at depth ``j``: the gap vanishes outside a null set.

    The union of the conditional spaces of depth-``j`` nodes with a nonzero
    gap is tested for nullity at the root.
    """
    if not 0 <= j <= tree.horizon:
        raise ValueError(f"depth {j} outside 0..{tree.horizon}")
    up, low = integral_bounds(tree, f, constraint)
    nodes = tree.at_depth(j)
    gap = {p: ext_add(up[p], ext_neg(low[p])) for p in nodes}
    bad = [p for p in nodes if not _is_zero(tree, gap[p])]
    E = [leaf for p in bad for leaf in tree.leaves(p)]
    norm = conditional_norm(tree, indicator(E), ()) if E else tree.mode.coerce(0)
    integrable = _is_zero(tree, norm)
    values = {p: up[p] for p in nodes if p not in bad}
    return IntegrabilityReport(j, {p: up[p] for p in nodes}, {p: low[p] for p in nodes},
                               gap, bad, norm, integrable, values)


def conditional_integral(
    tree: TrajectoryTree, f: PayoffLike, node: Sequence[int] = ()
) -> Number:
    """``upper = lower`` at ``node``; raises when the two differ there."""
    node = tuple(node)
    vals = as_values(tree, f)
    up = solve(tree, vals, node).value
    low = ext_neg(solve(tree, negate(vals), node).value)
    if not _is_zero(tree, ext_add(up, ext_neg(low))):
        raise ValueError(
            f"not integrable at {format_path(node)}: upper {up} differs from lower {low}"
        )
    return up


@dataclass
class ConvergenceReport:
    kind: str
    depth: int
    integrals: Dict[NodePath, List[Number]]
    target: Dict[NodePath, Number]
    residuals: Dict[NodePath, List[Number]]
    norm_residuals: Dict[NodePath, List[Number]]
    tail_bound: Number
    ok: bool


def _leq_all(tree: TrajectoryTree, a: LeafValues, b: LeafValues) -> bool:
    return all(tree.mode.leq(a[k], b[k]) for k in a)


def verify_convergence_theorems(
    tree: TrajectoryTree,
    family: Sequence[PayoffLike],
    j: int = 0,
    kind: str = "mct",
    limit: Optional[PayoffLike] = None,
    max_terms: int = 64,
) -> ConvergenceReport:
    """Numeric instance of monotone convergence (``"mct"``) or Beppo-Levi (``"beppo-levi"``).

    ``mct``: ``family`` must be pointwise nondecreasing; its last member is the
    limit unless ``limit`` is given.  Integrals and norms of ``f - f_n`` are
    reported per depth-``j`` node.

    ``beppo-levi``: ``family`` holds nonnegative terms; the integral of the sum
    is compared with the sum of integrals.  Terms past ``max_terms`` are
    dropped and their norms summed into ``tail_bound``.
    """
    kind = kind.lower().replace("_", "-")
    if kind not in ("mct", "beppo-levi"):
        raise ValueError(f"unknown convergence theorem {kind!r}")
    mode = tree.mode
    fam = [as_values(tree, g) for g in family]
    if not fam:
        raise ValueError("empty family")
    nodes = tree.at_depth(j)
    zero = mode.coerce(0)
    tail = zero
    if kind == "beppo-levi":
        if len(fam) > max_terms:
            for g in fam[max_terms:]:
                tail = ext_add(tail, conditional_norm(tree, g, ()))
            fam = fam[:max_terms]
        if any(x < 0 for g in fam for x in g.values()):
            raise ValueError("Beppo-Levi terms must be nonnegative")
        partial: List[LeafValues] = []
        acc = {k: zero for k in tree.all_leaves}
        for g in fam:
            acc = {k: ext_add(acc[k], g[k]) for k in acc}
            partial.append(acc)
        seq = partial
        lim = partial[-1]
    else:
        fam = fam[:max_terms]
        for a, b in zip(fam, fam[1:]):
            if not _leq_all(tree, a, b):
                raise ValueError("family is not pointwise nondecreasing")
        seq = fam
        lim = as_values(tree, limit) if limit is not None else fam[-1]
        if not _leq_all(tree, seq[-1], lim):
            raise ValueError("limit lies below a member of the family")

    target = {p: conditional_integral(tree, lim, p) for p in nodes}
    integrals: Dict[NodePath, List[Number]] = {p: [] for p in nodes}
    residuals: Dict[NodePath, List[Number]] = {p: [] for p in nodes}
    norms: Dict[NodePath, List[Number]] = {p: [] for p in nodes}
    if kind == "beppo-levi":
        term_sums = {p: zero for p in nodes}
        for g in fam:
            for p in nodes:
                term_sums[p] = ext_add(term_sums[p], conditional_integral(tree, g, p))
                integrals[p].append(term_sums[p])
    else:
        for g in seq:
            for p in nodes:
                integrals[p].append(conditional_integral(tree, g, p))
    for g in seq:
        diff = {k: ext_add(lim[k], ext_neg(g[k])) for k in lim}
        for p in nodes:
            norms[p].append(conditional_norm(tree, diff, p))
    ok = True
    for p in nodes:
        for x in integrals[p]:
            r = ext_add(target[p], ext_neg(x))
            residuals[p].append(abs(r) if is_finite(r) else r)
        last = residuals[p][-1]
        if not _is_zero(tree, last):
            ok = False
        if kind == "mct":
            rs = residuals[p]
            if any(not mode.leq(b, a) for a, b in zip(rs, rs[1:])):
                ok = False
            if not _is_zero(tree, norms[p][-1]):
                ok = False
    return ConvergenceReport(kind, j, integrals, target, residuals, norms, tail, ok)


@dataclass(frozen=True)
class Decomposition:
    """``f = v - u`` with ``v`` elementary and ``u >= 0`` of small norm."""

    node: NodePath
    v: ElementaryFunction
    u: LeafValues
    u_norm: Number
    ok: bool


def decompose_integrable(
    tree: TrajectoryTree, f: PayoffLike, node: Sequence[int] = (), eps: Number = 0
) -> Decomposition:
    """Split ``f`` as a dominating elementary function minus a small nonnegative remainder."""
    node = tuple(node)
    vals = as_values(tree, f)
    cert = hedge_certificate(tree, vals, node)
    mode = tree.mode
    if cert.elements:
        v = cert.elements[0]
    else:
        v = ElementaryFunction(node, mode.coerce(0), {}, tree.horizon)
    vv = v.as_payoff_values(tree)
    leaves = set(tree.leaves(node))
    u = {k: (vv[k] - vals[k] if k in leaves else mode.coerce(0)) for k in tree.all_leaves}
    if any(x < 0 and not mode.is_zero(x) for x in u.values()):
        raise AssertionError("certificate does not dominate the payoff")
    norm = conditional_norm(tree, u, node)
    return Decomposition(node, v, u, norm, mode.leq(norm, mode.coerce(eps)))


__all__ = [
    "ConvergenceReport",
    "Decomposition",
    "IntegrabilityReport",
    "KCheck",
    "NullReport",
    "check_K_property",
    "check_L_property",
    "check_integrable",
    "conditional_integral",
    "decompose_integrable",
    "integral_bounds",
    "is_conditionally_null",
    "verify_convergence_theorems",
]
