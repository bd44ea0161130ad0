"""Payoffs: extended-real functions on the leaves of a trajectory tree."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Union

from .extreal import INF, NEG_INF, Number, ext_add, ext_neg, ext_scale, is_finite
from .tree import NodePath, TrajectoryTree, format_path

KINDS = (
    "constant",
    "terminal",
    "call",
    "put",
    "abs_increment",
    "increment",
    "indicator",
    "table",
)


class MissingLeafError(KeyError):
    """A leaf table does not define the requested leaf."""


@dataclass(frozen=True)
class Payoff:
    """A payoff described by a kind and its parameter.

    ``constant`` uses ``param`` as the value, ``call``/``put`` use it as the
    strike, ``abs_increment``/``increment`` use it as the step index ``i``
    (the increment ``S_{i+1} - S_i``), ``indicator`` uses ``leaves`` and
    ``table`` uses ``table``.
    """

    kind: str
    param: Optional[Number] = None
    leaves: FrozenSet[NodePath] = field(default_factory=frozenset)
    table: Mapping[NodePath, Number] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown payoff kind {self.kind!r}")
        if self.kind in ("constant", "call", "put", "abs_increment", "increment"):
            if self.param is None:
                raise ValueError(f"payoff kind {self.kind!r} needs a parameter")

    def value(self, tree: TrajectoryTree, leaf: Sequence[int]) -> Number:
        return evaluate_payoff(self, tree, leaf)

    def values(self, tree: TrajectoryTree) -> Dict[NodePath, Number]:
        return {leaf: evaluate_payoff(self, tree, leaf) for leaf in tree.all_leaves}

    def describe(self) -> str:
        if self.kind == "terminal":
            return "terminal"
        if self.kind == "indicator":
            return f"indicator[{len(self.leaves)} leaves]"
        if self.kind == "table":
            return f"table[{len(self.table)} leaves]"
        return f"{self.kind}:{self.param}"


def constant(c: Number) -> Payoff:
    return Payoff("constant", c)


def terminal() -> Payoff:
    return Payoff("terminal")


def call(strike: Number) -> Payoff:
    return Payoff("call", strike)


def put(strike: Number) -> Payoff:
    return Payoff("put", strike)


def abs_increment(i: int) -> Payoff:
    return Payoff("abs_increment", int(i))


def increment(i: int) -> Payoff:
    return Payoff("increment", int(i))


def indicator(leaves: Iterable[Sequence[int]]) -> Payoff:
    return Payoff("indicator", leaves=frozenset(tuple(x) for x in leaves))


def table(values: Mapping[Sequence[int], Number]) -> Payoff:
    return Payoff("table", table={tuple(k): v for k, v in values.items()})


def evaluate_payoff(f: Payoff, tree: TrajectoryTree, leaf: Sequence[int]) -> Number:
    """Value of ``f`` on the trajectory ending at ``leaf``."""
    leaf = tuple(leaf)
    if len(leaf) != tree.horizon:
        raise ValueError(f"{format_path(leaf)} is not a leaf")
    mode = tree.mode
    kind = f.kind
    if kind == "table":
        try:
            return mode_value(tree, f.table[leaf])
        except KeyError:
            raise MissingLeafError(f"table payoff has no entry for leaf {format_path(leaf)}") from None
    if kind == "indicator":
        tree.node(leaf)
        return mode.coerce(1 if leaf in f.leaves else 0)
    if kind == "constant":
        tree.node(leaf)
        return mode_value(tree, f.param)
    path = tree.price_path(leaf)
    if kind == "terminal":
        return path[-1]
    if kind == "call":
        return max(path[-1] - mode.coerce(f.param), mode.coerce(0))
    if kind == "put":
        return max(mode.coerce(f.param) - path[-1], mode.coerce(0))
    i = int(f.param)
    if not 0 <= i < tree.horizon:
        raise ValueError(f"increment index {i} outside 0..{tree.horizon - 1}")
    d = path[i + 1] - path[i]
    return abs(d) if kind == "abs_increment" else d


def mode_value(tree: TrajectoryTree, x: Number) -> Number:
    if is_finite(x):
        return tree.mode.coerce(x)
    return x


# Leaf-value arithmetic.  Internal routines work with dictionaries mapping
# each leaf to its value, which is what ``as_values`` produces.

LeafValues = Dict[NodePath, Number]
PayoffLike = Union[Payoff, Mapping[NodePath, Number], Callable[[Sequence[Number]], Number]]


def as_values(tree: TrajectoryTree, f: PayoffLike) -> LeafValues:
    """Resolve a payoff, leaf mapping or price-path callable to leaf values."""
    if isinstance(f, Payoff):
        return f.values(tree)
    if callable(f):
        return {leaf: mode_value(tree, f(tree.price_path(leaf))) for leaf in tree.all_leaves}
    out: LeafValues = {}
    for leaf in tree.all_leaves:
        try:
            out[leaf] = mode_value(tree, f[leaf])
        except KeyError:
            raise MissingLeafError(f"no value for leaf {format_path(leaf)}") from None
    return out


def negate(v: LeafValues) -> LeafValues:
    return {k: ext_neg(x) for k, x in v.items()}


def positive_part(v: LeafValues) -> LeafValues:
    return {k: (x if x > 0 else 0 * x if is_finite(x) else 0) for k, x in v.items()}


def negative_part(v: LeafValues) -> LeafValues:
    return positive_part(negate(v))


def absolute(v: LeafValues) -> LeafValues:
    return {k: (INF if not is_finite(x) else abs(x)) for k, x in v.items()}


def scale(c: Number, v: LeafValues) -> LeafValues:
    return {k: ext_scale(c, x) for k, x in v.items()}


def add(u: LeafValues, v: LeafValues) -> LeafValues:
    return {k: ext_add(u[k], v[k]) for k in u}


def restrict(v: LeafValues, prefix: Sequence[int]) -> LeafValues:
    p = tuple(prefix)
    return {k: x for k, x in v.items() if k[: len(p)] == p}


__all__ = [
    "INF",
    "KINDS",
    "LeafValues",
    "MissingLeafError",
    "NEG_INF",
    "Payoff",
    "abs_increment",
    "absolute",
    "add",
    "as_values",
    "call",
    "constant",
    "evaluate_payoff",
    "increment",
    "indicator",
    "negate",
    "negative_part",
    "positive_part",
    "put",
    "restrict",
    "scale",
    "table",
    "terminal",
]
