"""Node taxonomy: up-down, flat and the two arbitrage types."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, Sequence

from .extreal import Number
from .tree import NodePath, TrajectoryTree, format_path


class NodeKind(str, enum.Enum):
    UP_DOWN = "UpDown"
    FLAT = "Flat"
    ARBITRAGE_I = "ArbitrageI"
    ARBITRAGE_II = "ArbitrageII"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class NodeClass:
    kind: NodeKind
    zero_neutral: bool
    sup_inc: Number
    inf_inc: Number

    @property
    def is_arbitrage(self) -> bool:
        return self.kind in (NodeKind.ARBITRAGE_I, NodeKind.ARBITRAGE_II)


def classify_increments(increments: Sequence[Number], mode) -> NodeClass:
    """Classify a node from the increments of its children."""
    signs = [mode.sign(d) for d in increments]
    sup_inc = max(increments)
    inf_inc = min(increments)
    s_sup = max(signs)
    s_inf = min(signs)
    if mode.is_zero(sup_inc):
        sup_inc = sup_inc * 0
    if mode.is_zero(inf_inc):
        inf_inc = inf_inc * 0
    if s_sup > 0 and s_inf < 0:
        kind = NodeKind.UP_DOWN
    elif s_sup == 0 and s_inf == 0:
        kind = NodeKind.FLAT
    elif 0 in signs:
        kind = NodeKind.ARBITRAGE_I
    else:
        kind = NodeKind.ARBITRAGE_II
    return NodeClass(kind, s_sup >= 0 and s_inf <= 0, sup_inc, inf_inc)


def classify_node(tree: TrajectoryTree, node: Sequence[int]) -> NodeClass:
    """Classify an interior node by the signs of its one-step increments."""
    node = tuple(node)
    if tree.is_leaf(node):
        raise ValueError(f"{format_path(node)} is a leaf; only interior nodes are classified")
    return classify_increments(tree.increments(node), tree.mode)


@dataclass(frozen=True)
class TreeScan:
    classes: Dict[NodePath, NodeClass]
    locally_0_neutral: bool
    locally_arbitrage_free: bool
    has_type_ii: bool

    def nodes_of(self, kind: NodeKind) -> list:
        return [p for p, c in self.classes.items() if c.kind == kind]

    def summary(self) -> dict:
        counts = {k.value: 0 for k in NodeKind}
        for c in self.classes.values():
            counts[c.kind.value] += 1
        return {
            "locally_0_neutral": self.locally_0_neutral,
            "locally_arbitrage_free": self.locally_arbitrage_free,
            "has_type_II": self.has_type_ii,
            "counts": counts,
        }


def scan_tree(tree: TrajectoryTree) -> TreeScan:
    classes = {p: classify_node(tree, p) for p in tree.interior()}
    values = classes.values()
    return TreeScan(
        classes=classes,
        locally_0_neutral=all(c.zero_neutral for c in values),
        locally_arbitrage_free=all(
            c.kind in (NodeKind.UP_DOWN, NodeKind.FLAT) for c in values
        ),
        has_type_ii=any(c.kind == NodeKind.ARBITRAGE_II for c in values),
    )


def type_ii_below(tree: TrajectoryTree, node: Sequence[int] = ()) -> list:
    """Type II nodes in the subtree rooted at ``node``."""
    return [
        p
        for p in tree.interior(node)
        if classify_node(tree, p).kind == NodeKind.ARBITRAGE_II
    ]
